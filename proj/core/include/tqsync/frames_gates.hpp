#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "tqsync/phase.hpp"

namespace tqsync {

using cplx = std::complex<double>;

/// Thrown when operators or states described in different party frames are
/// combined without an explicit frame conjugation.
class FrameMismatch : public std::logic_error {
public:
    FrameMismatch(Party expected, Party got);
};

/// A single-qubit unitary, written in the energy basis {|0>, |1>} relative to
/// one party's phase reference.
///
/// Entries are row-major. Construction checks U U^dagger = I, so every
/// instance in circulation is unitary.
class Unitary2 {
public:
    static constexpr double kUnitarityTolerance = 1e-9;

    Unitary2(cplx a00, cplx a01, cplx a10, cplx a11, Party frame);

    static Unitary2 identity(Party frame);
    static Unitary2 diagonal(cplx d0, cplx d1, Party frame);

    cplx operator()(int row, int col) const { return m_[static_cast<size_t>(2 * row + col)]; }
    const std::array<cplx, 4> &entries() const { return m_; }
    Party frame() const { return frame_; }

    cplx determinant() const;
    Unitary2 adjoint() const;
    bool is_diagonal() const;

    /// Largest entrywise deviation of U U^dagger from the identity.
    double unitarity_error() const;

    /// Same matrix, different frame label. Only meaningful for operators that
    /// are frame independent (diagonal ones) or after an explicit conjugation.
    Unitary2 retagged(Party frame) const;

    /// Operator product; both factors must be described in the same frame.
    friend Unitary2 operator*(const Unitary2 &lhs, const Unitary2 &rhs);

private:
    struct Unchecked {};
    Unitary2(std::array<cplx, 4> m, Party frame, Unchecked) : m_(m), frame_(frame) {}

    std::array<cplx, 4> m_;
    Party frame_;
};

/// The (k pi)-pulse of a resonant laser with phase `phi` relative to `frame`'s
/// clock:
///
///     [[cos(k pi/2),                  -i e^{-i phi} sin(k pi/2)],
///      [-i e^{+i phi} sin(k pi/2),    cos(k pi/2)              ]]
Unitary2 rabi_pulse(double k, PhaseAngle phi, Party frame);

/// The party's Pauli X: the pi-pulse at phase 0 with its global -i removed.
Unitary2 pauli_x_op(Party frame);

/// The party's Hadamard-like pi/2 pulse at phase pi/2, (1/sqrt2)[[1,-1],[1,1]].
Unitary2 hadamard_op(Party frame);

/// diag(e^{-i theta/2}, e^{+i theta/2}). Diagonal, hence the same matrix in
/// every frame; `frame` only sets the label used for composition checks.
Unitary2 z_rotation(PhaseAngle theta, Party frame = Party::Alice);

/// Returns e^{-i phi Z/2} U e^{+i phi Z/2}, labelled with the other party's
/// frame. With phi = phi_BA this maps an operation Bob performs (written in
/// his own frame) to its description in Alice's frame.
Unitary2 frame_conjugate(const Unitary2 &u, PhaseAngle phi_ba);

/// Alice-frame description of m coherent bounces (X_A X_B)^m, up to global
/// phase: e^{+i m phi_BA Z}.
Unitary2 bounce_unitary(std::uint64_t m, PhaseAngle phi_ba);

/// Smallest max-entry distance between `a` and `b` times any unit phase.
/// Frames must agree.
double distance_up_to_global_phase(const Unitary2 &a, const Unitary2 &b);

/// Entrywise max distance between the two matrices (frame labels ignored).
double max_entry_distance(const Unitary2 &a, const Unitary2 &b);

}  // namespace tqsync
