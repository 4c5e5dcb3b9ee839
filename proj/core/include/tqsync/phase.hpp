#pragma once

#include <numbers>
#include <string_view>

namespace tqsync {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// The two parties whose clocks differ by the unknown offset.
enum class Party { Alice, Bob };

constexpr Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }

std::string_view to_string(Party p);

/// An angle relative to some party's phase reference, stored modulo 2pi.
///
/// The canonical representative always lies in [0, 2pi) so that two parties
/// never disagree about which branch an angle lives on.
class PhaseAngle {
public:
    constexpr PhaseAngle() = default;
    explicit PhaseAngle(double radians);

    /// Angle given in units of pi (the `T` parameterisation used on the CLI).
    static PhaseAngle from_half_turns(double t);

    double radians() const { return radians_; }

    PhaseAngle operator-() const { return PhaseAngle(-radians_); }
    friend PhaseAngle operator+(PhaseAngle a, PhaseAngle b) { return PhaseAngle(a.radians_ + b.radians_); }
    friend PhaseAngle operator-(PhaseAngle a, PhaseAngle b) { return PhaseAngle(a.radians_ - b.radians_); }
    friend bool operator==(PhaseAngle, PhaseAngle) = default;

private:
    double radians_ = 0.0;
};

/// Reduces `x` into [0, 2pi). Non-finite inputs are rejected.
double wrap_two_pi(double x);

}  // namespace tqsync
