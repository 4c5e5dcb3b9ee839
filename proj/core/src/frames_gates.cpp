#include "tqsync/frames_gates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tqsync {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx expi(double x) { return {std::cos(x), std::sin(x)}; }

std::array<cplx, 4> multiply(const std::array<cplx, 4> &a, const std::array<cplx, 4> &b) {
    return {
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    };
}

double unitarity_error_of(const std::array<cplx, 4> &m) {
    // U U^dagger
    cplx g00 = m[0] * std::conj(m[0]) + m[1] * std::conj(m[1]);
    cplx g01 = m[0] * std::conj(m[2]) + m[1] * std::conj(m[3]);
    cplx g11 = m[2] * std::conj(m[2]) + m[3] * std::conj(m[3]);
    return std::max({std::abs(g00 - 1.0), std::abs(g01), std::abs(g11 - 1.0)});
}

}  // namespace

FrameMismatch::FrameMismatch(Party expected, Party got)
    : std::logic_error("frame mismatch: expected " + std::string(to_string(expected)) + " frame, got " +
                       std::string(to_string(got)) + " frame (frame_conjugate first)") {}

Unitary2::Unitary2(cplx a00, cplx a01, cplx a10, cplx a11, Party frame) : m_{a00, a01, a10, a11}, frame_(frame) {
    if (unitarity_error() > kUnitarityTolerance) {
        throw std::invalid_argument("Unitary2: matrix is not unitary");
    }
}

Unitary2 Unitary2::identity(Party frame) { return Unitary2({1.0, 0.0, 0.0, 1.0}, frame, Unchecked{}); }

Unitary2 Unitary2::diagonal(cplx d0, cplx d1, Party frame) { return Unitary2(d0, 0.0, 0.0, d1, frame); }

cplx Unitary2::determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

Unitary2 Unitary2::adjoint() const {
    return Unitary2({std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])}, frame_, Unchecked{});
}

bool Unitary2::is_diagonal() const { return m_[1] == 0.0 && m_[2] == 0.0; }

double Unitary2::unitarity_error() const { return unitarity_error_of(m_); }

Unitary2 Unitary2::retagged(Party frame) const { return Unitary2(m_, frame, Unchecked{}); }

Unitary2 operator*(const Unitary2 &lhs, const Unitary2 &rhs) {
    if (lhs.frame_ != rhs.frame_) {
        throw FrameMismatch(lhs.frame_, rhs.frame_);
    }
    return Unitary2(multiply(lhs.m_, rhs.m_), lhs.frame_, Unitary2::Unchecked{});
}

Unitary2 rabi_pulse(double k, PhaseAngle phi, Party frame) {
    if (!std::isfinite(k)) {
        throw std::invalid_argument("rabi_pulse: pulse area must be finite");
    }
    double half = k * kPi / 2.0;
    double c = std::cos(half);
    double s = std::sin(half);
    double p = phi.radians();
    return Unitary2(c, -kI * expi(-p) * s, -kI * expi(p) * s, c, frame);
}

Unitary2 pauli_x_op(Party frame) { return Unitary2(0.0, 1.0, 1.0, 0.0, frame); }

Unitary2 hadamard_op(Party frame) {
    const double r = 1.0 / std::sqrt(2.0);
    return Unitary2(r, -r, r, r, frame);
}

Unitary2 z_rotation(PhaseAngle theta, Party frame) {
    double h = theta.radians() / 2.0;
    return Unitary2::diagonal(expi(-h), expi(h), frame);
}

Unitary2 frame_conjugate(const Unitary2 &u, PhaseAngle phi_ba) {
    // e^{-i phi Z/2} U e^{+i phi Z/2}: diagonals unchanged, off-diagonals pick
    // up e^{-i phi} (upper) and e^{+i phi} (lower).
    double p = phi_ba.radians();
    const auto &m = u.entries();
    return Unitary2(m[0], m[1] * expi(-p), m[2] * expi(p), m[3], other(u.frame()));
}

Unitary2 bounce_unitary(std::uint64_t m, PhaseAngle phi_ba) {
    if (m == 0) {
        throw std::invalid_argument("bounce_unitary: need at least one bounce");
    }
    // m can be ~2^40; reduce m*phi in extended precision before the sin/cos.
    long double angle = std::fmod(static_cast<long double>(m) * static_cast<long double>(phi_ba.radians()),
                                  2.0L * std::numbers::pi_v<long double>);
    double a = static_cast<double>(angle);
    return Unitary2::diagonal(expi(a), expi(-a), Party::Alice);
}

double max_entry_distance(const Unitary2 &a, const Unitary2 &b) {
    double d = 0.0;
    for (size_t i = 0; i < 4; ++i) {
        d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return d;
}

double distance_up_to_global_phase(const Unitary2 &a, const Unitary2 &b) {
    if (a.frame() != b.frame()) {
        throw FrameMismatch(a.frame(), b.frame());
    }
    // Least-squares phase: maximise Re(e^{-i alpha} <b, a>).
    cplx overlap = 0.0;
    for (size_t i = 0; i < 4; ++i) {
        overlap += std::conj(b.entries()[i]) * a.entries()[i];
    }
    cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
    double d = 0.0;
    for (size_t i = 0; i < 4; ++i) {
        d = std::max(d, std::abs(a.entries()[i] - phase * b.entries()[i]));
    }
    return d;
}

}  // namespace tqsync
