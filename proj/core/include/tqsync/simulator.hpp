#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tqsync/frames_gates.hpp"
#include "tqsync/rng.hpp"

namespace tqsync {

/// Normalised single-qubit state. amp0 multiplies |0> (the excited state).
class PureQubit {
public:
    static constexpr double kNormTolerance = 1e-9;

    PureQubit(cplx amp0, cplx amp1, Party frame);

    static PureQubit ground(Party frame) { return PureQubit(0.0, 1.0, frame); }
    static PureQubit excited(Party frame) { return PureQubit(1.0, 0.0, frame); }

    cplx amp0() const { return amp0_; }
    cplx amp1() const { return amp1_; }
    Party frame() const { return frame_; }
    double norm_squared() const { return std::norm(amp0_) + std::norm(amp1_); }

    /// Probability that a -Z measurement returns +1 (collapse onto |1>).
    double prob_plus_one() const { return std::norm(amp1_); }

private:
    friend PureQubit apply(const Unitary2 &u, const PureQubit &psi);
    friend PureQubit frame_shift_state(const PureQubit &psi, PhaseAngle phi_ba);
    struct Unchecked {};
    PureQubit(cplx a0, cplx a1, Party frame, Unchecked) : amp0_(a0), amp1_(a1), frame_(frame) {}

    cplx amp0_;
    cplx amp1_;
    Party frame_;
};

/// U |psi>. Throws FrameMismatch when the operator and state frames differ.
PureQubit apply(const Unitary2 &u, const PureQubit &psi);

/// Description of the same physical state in the other party's frame:
/// amplitudes times e^{-i phi/2}, e^{+i phi/2}.
PureQubit frame_shift_state(const PureQubit &psi, PhaseAngle phi_ba);

/// Measures O = -Z. Returns +1 with probability |amp1|^2 and -1 otherwise.
/// Consumes exactly one uniform from `rng`. The post-measurement state is
/// not returned: every protocol measures terminally.
int measure_minus_z(const PureQubit &psi, RngStream &rng);

/// Samples a +-1 observable from its mean alone, which is enough whenever the
/// observable squares to the identity. Means outside [-1, 1] by more than
/// 1e-9 are rejected; smaller excursions are clamped.
int sample_pm1(double expectation, RngStream &rng);

/// Dense M-qubit statevector used as an exact oracle for GHZ parity
/// statistics. Basis index bit q is qubit q.
class GhzState {
public:
    static constexpr int kMaxQubits = 12;

    /// (|0...0> + |1...1>)/sqrt2 described in `frame`.
    GhzState(int qubits, Party frame);

    int qubits() const { return qubits_; }
    Party frame() const { return frame_; }
    std::span<const cplx> amplitudes() const { return amps_; }
    double norm_squared() const;

    void apply(const Unitary2 &u, int qubit);
    /// Applies frame_shift_state to every qubit and relabels the frame.
    void shift_frame(PhaseAngle phi_ba);
    /// <(-1)^M Z^{(x)M}>.
    double signed_parity_expectation() const;

private:
    int qubits_;
    Party frame_;
    std::vector<cplx> amps_;
};

/// Exact expectation of (-1)^M Z^{(x)M} after Alice prepares the M-qubit GHZ
/// state, it crosses to Bob's frame, Bob optionally applies
/// z_rotation(-quadrature_shift) on qubit 0, then H_B on every qubit.
/// Equals cos(M phi - quadrature_shift). Limited to M <= 12.
double ghz_parity_expectation(int qubits, PhaseAngle phi_ba, double quadrature_shift = 0.0);

}  // namespace tqsync
