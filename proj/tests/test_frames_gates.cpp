#include <cmath>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tqsync/frames_gates.hpp"
#include "tqsync/rng.hpp"

using namespace tqsync;

namespace {

oracle::Mat2 to_mat(const Unitary2 &u) { return u.entries(); }

double max_diff(const oracle::Mat2 &a, const oracle::Mat2 &b) {
    double d = 0.0;
    for (size_t i = 0; i < 4; ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

const cplx kI{0.0, 1.0};

}  // namespace

TEST(RabiPulse, pi_pulse_is_minus_i_x) {
    Unitary2 u = rabi_pulse(1.0, PhaseAngle(0.0), Party::Alice);
    EXPECT_LT(max_diff(to_mat(u), {0.0, -kI, -kI, 0.0}), 1e-15);
}

TEST(RabiPulse, two_pi_pulse_is_minus_identity) {
    Unitary2 u = rabi_pulse(2.0, PhaseAngle(1.3), Party::Bob);
    EXPECT_LT(max_diff(to_mat(u), {-1.0, 0.0, 0.0, -1.0}), 1e-15);
}

TEST(RabiPulse, half_pulse_with_phase) {
    double phi = 0.7;
    Unitary2 u = rabi_pulse(0.5, PhaseAngle(phi), Party::Alice);
    double s = std::sqrt(0.5);
    oracle::Mat2 expect{s, -kI * std::polar(1.0, -phi) * s, -kI * std::polar(1.0, phi) * s, s};
    EXPECT_LT(max_diff(to_mat(u), expect), 1e-15);
}

TEST(RabiPulse, unitary_for_random_parameters) {
    RngStream r(5);
    for (int i = 0; i < 500; ++i) {
        Unitary2 u = rabi_pulse(8 * r.uniform() - 4, PhaseAngle(kTwoPi * r.uniform()), Party::Alice);
        ASSERT_LT(u.unitarity_error(), 1e-14);
        ASSERT_NEAR(std::abs(u.determinant()), 1.0, 1e-14);
    }
}

TEST(Gates, named_gates) {
    double r = std::sqrt(0.5);
    EXPECT_LT(max_diff(to_mat(hadamard_op(Party::Alice)), {r, -r, r, r}), 1e-15);
    EXPECT_LT(max_diff(to_mat(pauli_x_op(Party::Bob)), {0.0, 1.0, 1.0, 0.0}), 0.0 + 1e-300);
    EXPECT_LT(max_diff(to_mat(z_rotation(PhaseAngle(0.9))), oracle::rz(0.9)), 1e-15);
}

TEST(Unitary2, rejects_non_unitary) {
    EXPECT_THROW(Unitary2(1.0, 1.0, 0.0, 1.0, Party::Alice), std::invalid_argument);
    EXPECT_THROW(Unitary2(1.0 + 1e-6, 0.0, 0.0, 1.0, Party::Alice), std::invalid_argument);
    EXPECT_NO_THROW(Unitary2(1.0 + 1e-12, 0.0, 0.0, 1.0, Party::Alice));
}

TEST(Unitary2, product_matches_hand_multiplication) {
    Unitary2 a = rabi_pulse(0.3, PhaseAngle(0.4), Party::Alice);
    Unitary2 b = hadamard_op(Party::Alice);
    EXPECT_LT(max_diff(to_mat(a * b), oracle::mul(to_mat(a), to_mat(b))), 1e-15);
    EXPECT_EQ((a * b).frame(), Party::Alice);
}

TEST(Unitary2, mixed_frame_product_throws) {
    EXPECT_THROW((void)(hadamard_op(Party::Alice) * hadamard_op(Party::Bob)), FrameMismatch);
    EXPECT_NO_THROW((void)(hadamard_op(Party::Alice) * hadamard_op(Party::Bob).retagged(Party::Alice)));
}

TEST(Unitary2, adjoint_inverts) {
    Unitary2 u = rabi_pulse(1.37, PhaseAngle(2.2), Party::Bob);
    Unitary2 p = u * u.adjoint();
    EXPECT_LT(max_entry_distance(p, Unitary2::identity(Party::Bob)), 1e-15);
}

TEST(FrameConjugate, matches_explicit_rz_sandwich) {
    RngStream r(17);
    for (int i = 0; i < 200; ++i) {
        double phi = kTwoPi * r.uniform();
        Unitary2 u = rabi_pulse(4 * r.uniform(), PhaseAngle(kTwoPi * r.uniform()), Party::Bob);
        oracle::Mat2 expect = oracle::mul(oracle::mul(oracle::rz(phi), to_mat(u)), oracle::adjoint(oracle::rz(phi)));
        Unitary2 got = frame_conjugate(u, PhaseAngle(phi));
        ASSERT_LT(max_diff(to_mat(got), expect), 1e-14);
        ASSERT_EQ(got.frame(), Party::Alice);
    }
}

TEST(FrameConjugate, diagonal_operators_are_frame_independent) {
    Unitary2 z = z_rotation(PhaseAngle(1.1), Party::Bob);
    Unitary2 c = frame_conjugate(z, PhaseAngle(0.37));
    EXPECT_LT(max_entry_distance(c, z.retagged(Party::Alice)), 1e-15);
}

TEST(FrameConjugate, round_trip_with_negated_phase) {
    Unitary2 u = rabi_pulse(0.77, PhaseAngle(1.9), Party::Bob);
    PhaseAngle phi(2.5);
    Unitary2 back = frame_conjugate(frame_conjugate(u, phi), -phi);
    EXPECT_LT(max_entry_distance(back, u), 1e-15);
    EXPECT_EQ(back.frame(), Party::Bob);
}

TEST(Bounce, single_bounce_is_x_a_x_b) {
    RngStream r(3);
    for (int i = 0; i < 100; ++i) {
        PhaseAngle phi(kTwoPi * r.uniform());
        Unitary2 xx = pauli_x_op(Party::Alice) * frame_conjugate(pauli_x_op(Party::Bob), phi);
        ASSERT_LT(distance_up_to_global_phase(xx, bounce_unitary(1, phi)), 1e-14);
    }
}

TEST(Bounce, m_bounces_equal_repeated_products) {
    PhaseAngle phi(0.4321);
    Unitary2 xx = pauli_x_op(Party::Alice) * frame_conjugate(pauli_x_op(Party::Bob), phi);
    Unitary2 acc = Unitary2::identity(Party::Alice);
    for (std::uint64_t m = 1; m <= 16; ++m) {
        acc = xx * acc;
        ASSERT_LT(distance_up_to_global_phase(acc, bounce_unitary(m, phi)), 1e-13) << "m=" << m;
    }
}

TEST(Bounce, large_m_phase_reduced_in_extended_precision) {
    PhaseAngle phi(kPi / 1024 + 1e-7);
    for (std::uint64_t m : {std::uint64_t{2560}, std::uint64_t{1} << 30, std::uint64_t{1} << 40}) {
        long double a = std::fmod(static_cast<long double>(m) * static_cast<long double>(phi.radians()),
                                  2.0L * 3.141592653589793238462643383279502884L);
        Unitary2 u = bounce_unitary(m, phi);
        cplx want = std::polar(1.0, static_cast<double>(a));
        EXPECT_LT(std::abs(u(0, 0) - want), 1e-12) << "m=" << m;
        EXPECT_LT(std::abs(u(1, 1) - std::conj(want)), 1e-12) << "m=" << m;
    }
}

TEST(Bounce, zero_bounces_rejected) { EXPECT_THROW(bounce_unitary(0, PhaseAngle(1.0)), std::invalid_argument); }

TEST(Distance, global_phase_is_ignored) {
    Unitary2 u = rabi_pulse(0.6, PhaseAngle(0.2), Party::Alice);
    Unitary2 v = Unitary2::diagonal(std::polar(1.0, 1.234), std::polar(1.0, 1.234), Party::Alice) * u;
    EXPECT_LT(distance_up_to_global_phase(u, v), 1e-14);
    EXPECT_GT(max_entry_distance(u, v), 0.5);
}
