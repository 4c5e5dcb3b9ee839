#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace tqsync::selftest {

struct CheckResult {
    std::string module;
    std::string property;
    bool passed = false;
    std::string detail;
};

struct Options {
    std::uint64_t seed = 20240917;
    /// Closed form under test in the loss-model cross-checks. Tests swap in a
    /// mutant to confirm the suite notices.
    std::function<double(std::uint64_t, double)> expected_bounces;
};

/// Runs the invariant suite at reduced sample counts.
std::vector<CheckResult> run(const Options &opts = {});

/// Prints one line per check and returns kExitOk or kExitInvariant.
int report(const std::vector<CheckResult> &results, std::ostream &os);

}  // namespace tqsync::selftest
