#include "spindiff/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "spindiff/coupled_dynamics.hpp"
#include "spindiff/eigenmodes.hpp"
#include "spindiff/optics.hpp"
#include "spindiff/signal_fit.hpp"

namespace spindiff {
namespace {

using Clock = std::chrono::steady_clock;

SelfTestCheck timed(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    const auto start = Clock::now();
    SelfTestCheck check{name, false, {}, 0.0};
    try {
        auto [ok, detail] = body();
        check.passed = ok;
        check.detail = std::move(detail);
    } catch (const std::exception& e) {
        check.detail = std::string("exception: ") + e.what();
    }
    check.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return check;
}

std::pair<bool, std::string> dirichletRoots() {
    CellSpec cell;
    const std::vector<double> k = solveSphereRoots(cell, 0, 3);
    double worst = 0.0;
    for (std::size_t n = 0; n < k.size(); ++n) {
        const double exact = (static_cast<double>(n) + 1.0) * std::numbers::pi / cell.radius;
        worst = std::max(worst, std::abs(k[n] - exact) / exact);
    }
    return {worst < 1e-10, fmt::format("max relative error {:.2e}", worst)};
}

std::pair<bool, std::string> orthogonality(SelfTestFault fault) {
    CellSpec cell;
    cell.meanFreePath = 1e-3;
    const ModeRates rates{2e-5, 1.0, 0.0};
    std::vector<Mode> modes{makeSphereMode(cell, 0, 0, 0, rates), makeSphereMode(cell, 1, 0, 0, rates),
                            makeSphereMode(cell, 0, 1, 0, rates), makeSphereMode(cell, 0, 1, 1, rates),
                            makeSphereMode(cell, 0, 2, 0, rates)};
    if (fault == SelfTestFault::bessel) {
        modes[1].k *= 1.01;
    }
    const SpatialWeight one = [](const Vec3&) { return std::complex<double>(1.0, 0.0); };
    double worst = 0.0;
    for (std::size_t a = 0; a < modes.size(); ++a) {
        for (std::size_t b = a + 1; b < modes.size(); ++b) {
            worst = std::max(worst, std::abs(overlapIntegral(modes[a], modes[b], one, cell)));
        }
    }
    return {worst < 1e-8, fmt::format("max |overlap| {:.2e} over {} pairs", worst, modes.size() * (modes.size() - 1) / 2)};
}

std::pair<bool, std::string> parity() {
    CellSpec cell;
    const ModeRates rates{2e-5, 1.0, 0.0};
    const Mode s000 = makeSphereMode(cell, 0, 0, 0, rates);
    const Mode s100 = makeSphereMode(cell, 1, 0, 0, rates);
    const Mode dipole = makeSphereMode(cell, 0, 1, 0, rates);
    BeamSpec pump;
    pump.power = 1e-3;
    const double projection = std::abs(pumpProjection(pump, dipole, cell));
    const double coupling = std::abs(couplingJ({1e-7, 0.0}, 2.2e10, s000, s100, cell));
    const double worst = std::max(projection, coupling);
    return {worst < 1e-10, fmt::format("pump projection {:.2e}, coupling {:.2e}", projection, coupling)};
}

std::pair<bool, std::string> propagatorOracle() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    constexpr int kSystems = 20;
    for (int i = 0; i < kSystems; ++i) {
        const double g1 = 1.0 + 9.0 * u(rng);
        const CoupledSystem system = buildSystem(20.0 * (u(rng) - 0.5), 20.0 * (u(rng) - 0.5), g1,
                                                 1.0 + 9.0 * u(rng), Complex(10.0 * (u(rng) - 0.5), 10.0 * (u(rng) - 0.5)));
        const ModeAmplitudes start{Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), 0.0};
        const double t = 5.0 / g1 * u(rng);
        const ModeAmplitudes closed = evolve(system, start, t);
        const ModeAmplitudes numeric = evolveNumerically(system, start, t, 1e-12);
        const double scale = std::max(std::hypot(std::abs(closed.c1), std::abs(closed.c2)), 1e-300);
        worst = std::max(worst, std::hypot(std::abs(closed.c1 - numeric.c1), std::abs(closed.c2 - numeric.c2)) / scale);
    }
    return {worst < 1e-8, fmt::format("max relative deviation {:.2e} over {} systems", worst, kSystems)};
}

std::pair<bool, std::string> fitRoundTrip() {
    const std::vector<LorentzianComponent> truth{{1.0, 5.0, 1000.0, 0.0}, {0.4, 10.0, 1002.0, 0.3}};
    std::vector<double> grid(801);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = 940.0 + 0.15 * static_cast<double>(i);
    }
    const Spectrum spectrum = synthesizeSpectrum(truth, {0.01, -0.02}, grid, 0.0, 1);
    const FitResult fit = fitLorentzians(spectrum, 2);
    double worst = 0.0;
    for (std::size_t m = 0; m < truth.size(); ++m) {
        const LorentzianComponent& a = truth[m];
        const LorentzianComponent& b = fit.components[m];
        worst = std::max({worst, std::abs(a.amplitude - b.amplitude) / a.amplitude,
                          std::abs(a.linewidth - b.linewidth) / a.linewidth,
                          std::abs(a.center - b.center) / a.center, std::abs(a.phase - b.phase)});
    }
    return {worst < 1e-6, fmt::format("max parameter error {:.2e}", worst)};
}

}  // namespace

bool SelfTestReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const SelfTestCheck& c) { return c.passed; });
}

SelfTestReport runSelfTest(SelfTestFault fault) {
    const auto start = Clock::now();
    SelfTestReport report;
    report.checks.push_back(timed("dirichlet-roots", dirichletRoots));
    report.checks.push_back(timed("orthogonality", [fault] { return orthogonality(fault); }));
    report.checks.push_back(timed("parity", parity));
    report.checks.push_back(timed("propagator-oracle", propagatorOracle));
    report.checks.push_back(timed("fit-round-trip", fitRoundTrip));
    report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

void printSelfTestReport(std::ostream& out, const SelfTestReport& report) {
    for (const SelfTestCheck& c : report.checks) {
        out << fmt::format("{} {:<18} {:8.3f} s  {}\n", c.passed ? "PASS" : "FAIL", c.name, c.seconds, c.detail);
    }
    out << fmt::format("{} total {:.3f} s\n", report.passed() ? "PASS" : "FAIL", report.seconds);
}

}  // namespace spindiff
