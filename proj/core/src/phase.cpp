#include "tqsync/phase.hpp"

#include <cmath>
#include <stdexcept>

namespace tqsync {

std::string_view to_string(Party p) {
    return p == Party::Alice ? "Alice" : "Bob";
}

double wrap_two_pi(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("phase angle must be finite");
    }
    double r = std::fmod(x, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    // fmod of a tiny negative value can round back up to exactly 2pi.
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

PhaseAngle::PhaseAngle(double radians) : radians_(wrap_two_pi(radians)) {}

PhaseAngle PhaseAngle::from_half_turns(double t) {
    return PhaseAngle(t * kPi);
}

}  // namespace tqsync
