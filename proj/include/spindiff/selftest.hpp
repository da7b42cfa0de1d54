#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spindiff {

enum class SelfTestFault { none, bessel };

struct SelfTestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct SelfTestReport {
    std::vector<SelfTestCheck> checks;
    double seconds = 0.0;

    [[nodiscard]] bool passed() const;
};

/// Runtime invariant suite: root exactness, orthogonality, parity, propagator
/// oracle and fit round-trip. `fault = bessel` perturbs one radial root before
/// the orthogonality check so the gate can be seen to trip.
SelfTestReport runSelfTest(SelfTestFault fault = SelfTestFault::none);

void printSelfTestReport(std::ostream& out, const SelfTestReport& report);

}  // namespace spindiff
