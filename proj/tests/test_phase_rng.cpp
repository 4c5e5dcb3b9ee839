#include <cmath>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "tqsync/phase.hpp"
#include "tqsync/rng.hpp"

using namespace tqsync;

TEST(PhaseAngle, wraps_into_canonical_range) {
    EXPECT_DOUBLE_EQ(PhaseAngle(kTwoPi + 0.25).radians(), 0.25);
    EXPECT_NEAR(PhaseAngle(-0.25).radians(), kTwoPi - 0.25, 1e-15);
    EXPECT_EQ(PhaseAngle(kTwoPi).radians(), 0.0);
    EXPECT_EQ(PhaseAngle(0.0).radians(), 0.0);
}

TEST(PhaseAngle, tiny_negative_does_not_round_to_two_pi) {
    double r = PhaseAngle(-1e-18).radians();
    EXPECT_GE(r, 0.0);
    EXPECT_LT(r, kTwoPi);
}

TEST(PhaseAngle, half_turns) {
    EXPECT_DOUBLE_EQ(PhaseAngle::from_half_turns(0.5).radians(), kPi / 2);
    EXPECT_DOUBLE_EQ(PhaseAngle::from_half_turns(1.0).radians(), kPi);
    EXPECT_EQ(PhaseAngle::from_half_turns(2.0).radians(), 0.0);
}

TEST(PhaseAngle, arithmetic_stays_canonical) {
    PhaseAngle a(5.0), b(4.0);
    EXPECT_NEAR((a + b).radians(), 9.0 - kTwoPi, 1e-14);
    EXPECT_NEAR((b - a).radians(), kTwoPi - 1.0, 1e-14);
    EXPECT_NEAR((-a).radians(), kTwoPi - 5.0, 1e-14);
}

TEST(PhaseAngle, rejects_non_finite) {
    EXPECT_THROW(PhaseAngle(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    EXPECT_THROW(PhaseAngle(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(Party, other_and_names) {
    EXPECT_EQ(other(Party::Alice), Party::Bob);
    EXPECT_EQ(other(Party::Bob), Party::Alice);
    EXPECT_EQ(to_string(Party::Alice), "Alice");
}

TEST(RngStream, same_seed_same_sequence) {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
    }
    EXPECT_EQ(a.position(), 100u);
}

TEST(RngStream, children_are_pure_functions_of_label) {
    RngStream root(9);
    RngStream used = root;
    for (int i = 0; i < 10; ++i) {
        used.next_u64();
    }
    // Consuming the parent does not move its children.
    RngStream c1 = root.child("row", 3);
    RngStream c2 = used.child("row", 3);
    EXPECT_EQ(c1.next_u64(), c2.next_u64());
    EXPECT_EQ(root.child("row", 3).path(), "/row#3");
    EXPECT_EQ(root.child("a").child("b", 2).path(), "/a#0/b#2");
}

TEST(RngStream, sibling_labels_differ) {
    RngStream root(1);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        firsts.insert(root.child("run", i).next_u64());
    }
    firsts.insert(root.child("truth").next_u64());
    firsts.insert(root.child("protocol").next_u64());
    EXPECT_EQ(firsts.size(), 1002u);
}

TEST(RngStream, different_seeds_differ) {
    EXPECT_NE(RngStream(1).next_u64(), RngStream(2).next_u64());
    EXPECT_NE(RngStream(0).next_u64(), RngStream(1).next_u64());
}

TEST(RngStream, uniform_moments) {
    RngStream r(123);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sum_sq += u * u;
    }
    double mean = sum / n;
    double var = sum_sq / n - mean * mean;
    // Standard error of the mean is sqrt(1/12 / n) ~ 6.5e-4.
    EXPECT_NEAR(mean, 0.5, 4 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(var, 1.0 / 12, 2e-3);
}

TEST(RngStream, known_answer_pins_the_generator) {
    // Pinned so accidental changes to the mixing break loudly: reports are
    // only reproducible while the stream is bit-stable.
    RngStream r(0);
    std::uint64_t first = r.next_u64();
    RngStream again(0);
    EXPECT_EQ(first, again.next_u64());
    EXPECT_EQ(mix64(0), 0u);
    EXPECT_EQ(fnv1a64(""), 0xCBF29CE484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
}
