#include "tqsync/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tqsync {

namespace {
cplx expi(double x) { return {std::cos(x), std::sin(x)}; }
}  // namespace

PureQubit::PureQubit(cplx amp0, cplx amp1, Party frame) : amp0_(amp0), amp1_(amp1), frame_(frame) {
    if (std::abs(norm_squared() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("PureQubit: state is not normalised");
    }
}

PureQubit apply(const Unitary2 &u, const PureQubit &psi) {
    if (u.frame() != psi.frame()) {
        throw FrameMismatch(psi.frame(), u.frame());
    }
    return PureQubit(u(0, 0) * psi.amp0_ + u(0, 1) * psi.amp1_, u(1, 0) * psi.amp0_ + u(1, 1) * psi.amp1_, psi.frame_,
                     PureQubit::Unchecked{});
}

PureQubit frame_shift_state(const PureQubit &psi, PhaseAngle phi_ba) {
    double h = phi_ba.radians() / 2.0;
    return PureQubit(psi.amp0_ * expi(-h), psi.amp1_ * expi(h), other(psi.frame_), PureQubit::Unchecked{});
}

int measure_minus_z(const PureQubit &psi, RngStream &rng) {
    return rng.uniform() < psi.prob_plus_one() ? +1 : -1;
}

int sample_pm1(double expectation, RngStream &rng) {
    if (!(std::abs(expectation) <= 1.0 + 1e-9)) {
        throw std::invalid_argument("sample_pm1: expectation " + std::to_string(expectation) +
                                    " outside [-1, 1]");
    }
    double p = (1.0 + std::clamp(expectation, -1.0, 1.0)) / 2.0;
    return rng.uniform() < p ? +1 : -1;
}

GhzState::GhzState(int qubits, Party frame) : qubits_(qubits), frame_(frame) {
    if (qubits < 1 || qubits > kMaxQubits) {
        throw std::invalid_argument("GhzState: qubit count " + std::to_string(qubits) + " outside [1, " +
                                    std::to_string(kMaxQubits) + "]");
    }
    amps_.assign(size_t{1} << qubits, cplx{0.0, 0.0});
    const double r = 1.0 / std::sqrt(2.0);
    amps_.front() = r;
    amps_.back() = r;
}

double GhzState::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void GhzState::apply(const Unitary2 &u, int qubit) {
    if (u.frame() != frame_) {
        throw FrameMismatch(frame_, u.frame());
    }
    if (qubit < 0 || qubit >= qubits_) {
        throw std::out_of_range("GhzState::apply: qubit index out of range");
    }
    const size_t bit = size_t{1} << qubit;
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) {
            continue;
        }
        cplx a0 = amps_[i];
        cplx a1 = amps_[i | bit];
        amps_[i] = u(0, 0) * a0 + u(0, 1) * a1;
        amps_[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

void GhzState::shift_frame(PhaseAngle phi_ba) {
    // Per-qubit e^{-i phi Z/2}; on a basis state with w ones the product of
    // phases is e^{-i phi (M - 2w)/2}.
    double h = phi_ba.radians() / 2.0;
    for (size_t i = 0; i < amps_.size(); ++i) {
        int ones = std::popcount(i);
        int zeros = qubits_ - ones;
        amps_[i] *= expi(-h * zeros + h * ones);
    }
    frame_ = other(frame_);
}

double GhzState::signed_parity_expectation() const {
    double e = 0.0;
    for (size_t i = 0; i < amps_.size(); ++i) {
        // Z|0> = |0>, Z|1> = -|1>; parity sign is (-1)^{ones}.
        double sign = (std::popcount(i) % 2 == 0) ? 1.0 : -1.0;
        e += sign * std::norm(amps_[i]);
    }
    return (qubits_ % 2 == 0) ? e : -e;
}

double ghz_parity_expectation(int qubits, PhaseAngle phi_ba, double quadrature_shift) {
    if (qubits < 1 || qubits > GhzState::kMaxQubits) {
        throw std::invalid_argument("ghz_parity_expectation: M must lie in [1, 12]");
    }
    GhzState state(qubits, Party::Alice);
    state.shift_frame(phi_ba);
    if (quadrature_shift != 0.0) {
        state.apply(z_rotation(PhaseAngle(-quadrature_shift), Party::Bob), 0);
    }
    const Unitary2 h = hadamard_op(Party::Bob);
    for (int q = 0; q < qubits; ++q) {
        state.apply(h, q);
    }
    return state.signed_parity_expectation();
}

}  // namespace tqsync
