#include "spindiff/pump_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "spindiff/errors.hpp"

namespace spindiff {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void requireConstants(const CouplingConstants& c) {
    std::vector<std::string> missing;
    auto check = [&](double v, const char* key) {
        if (std::isnan(v)) {
            missing.emplace_back(key);
        }
    };
    check(c.jScale, "coupling.j_scale");
    check(c.kappaShift, "coupling.kappa_shift");
    check(c.kappaBroad, "coupling.kappa_broad");
    check(c.kappaSe, "coupling.kappa_se");
    check(c.gainCoeff[0], "coupling.eta1");
    check(c.gainCoeff[1], "coupling.eta2");
    if (!missing.empty()) {
        std::string list;
        for (const auto& k : missing) {
            list += (list.empty() ? "" : ", ") + k;
        }
        throw ConfigError("pump sweep is missing required constants: " + list, missing);
    }
}

double pathHalfLength(const CellSpec& cell) {
    return cell.geometry == Geometry::box ? 0.5 * cell.box.lz : cell.radius;
}

}  // namespace

void parallelFor(std::size_t count, int threads, const std::function<void(std::size_t)>& f) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            f(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    f(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

ModePair couplingModes(const CellSpec& cell, const ModeRates& rates) {
    ModePair pair;
    if (cell.geometry == Geometry::box) {
        pair.first = makeBoxMode(cell.box, 1, 1, 1, rates);
        pair.second = makeBoxMode(cell.box, 1, 1, 2, rates);
    } else {
        pair.first = makeSphereMode(cell, 0, 0, 0, rates);
        pair.second = makeSphereMode(cell, 0, 1, 0, rates);
    }
    pair.zOverlap = overlapIntegral(pair.second, pair.first, [](const Vec3& p) { return Complex(p.z, 0.0); }, cell)
                        .real();
    return pair;
}

std::vector<SweepPoint> pumpSweep(const SweepConfig& config) {
    requireConstants(config.coupling);
    config.cell.validate();
    config.gas.validate();
    config.rates.validate();
    if (config.powers.empty()) {
        throw ConfigError("pump sweep needs a non-empty power grid", {"power.count"});
    }
    if (!std::is_sorted(config.powers.begin(), config.powers.end())) {
        throw ConfigError("pump power grid must be ascending", {"power.start", "power.stop"});
    }

    const double density = vaporDensity(config.temperature, config.gas);
    ModeRates base;
    base.diffusion = diffusionCoefficient(config.temperature, config.gas);
    base.decoherence = totalDecoherenceRate(config.rates);
    const ModePair modes = couplingModes(config.cell, base);
    const double halfPath = pathHalfLength(config.cell);
    const double thickness = opticalThickness(density, config.gas, halfPath);

    // Phase of J from the configured gradient and the z matrix element.
    const Complex jDirection = Complex(0.0, -1.0) * config.coupling.gradient * modes.zOverlap;
    const Complex jPhase = std::abs(jDirection) > 0.0 ? jDirection / std::abs(jDirection) : Complex(0.0, -1.0);

    std::vector<SweepPoint> points(config.powers.size());
    parallelFor(points.size(), config.threads, [&](std::size_t i) {
        const double power = config.powers[i];
        const double pA = pumpPolarization(power, config.saturationPower);
        BeamSpec beam = config.pump;
        beam.axis = Axis::z;
        beam.power = power;
        if (config.attenuationFromOpticalThickness) {
            beam.attenuation = thickness / (2.0 * halfPath) * (1.0 - pA);
        }

        std::array<double, 2> intensity{};
        std::array<double, 2> projection{};
        const std::array<const Mode*, 2> pair{&modes.first, &modes.second};
        for (int m = 0; m < 2; ++m) {
            intensity[m] = power > 0.0 ? effectiveIntensity(beam, *pair[m], config.cell, config.quadrature) : 0.0;
            projection[m] = pumpProjection(beam, *pair[m], config.cell, config.quadrature).real();
        }

        const double magnetization = nobleGasMagnetizationProxy(config.gas, density, pA);
        std::array<double, 2> omega{};
        std::array<double, 2> gamma{};
        for (int m = 0; m < 2; ++m) {
            omega[m] = config.coupling.kappaShift * intensity[m] - config.coupling.kappaSe * magnetization;
            gamma[m] = pair[m]->decayRate + config.coupling.kappaBroad * intensity[m];
        }
        const double meanOmega = 0.5 * (omega[0] + omega[1]);
        const Complex coupling = config.coupling.jScale * density * pA * jPhase;
        const std::array<Complex, 2> gain{config.coupling.gainCoeff[0] * pA * projection[0],
                                          config.coupling.gainCoeff[1] * pA * projection[1]};
        const CoupledSystem system =
            buildSystem(omega[0] - meanOmega, omega[1] - meanOmega, gamma[0], gamma[1], coupling, gain);
        const ModeAmplitudes final = evolve(system, ModeAmplitudes{}, config.interrogationTime);

        SweepPoint& pt = points[i];
        pt.power = power;
        pt.polarization = pA;
        pt.coupling = coupling;
        pt.system = system;
        pt.gamma1 = gamma[0] / kTwoPi;
        pt.gamma2 = gamma[1] / kTwoPi;
        pt.f1 = (config.larmorFrequency + omega[0]) / kTwoPi;
        pt.f2 = (config.larmorFrequency + omega[1]) / kTwoPi;
        pt.n1 = excitationNumber({std::abs(final.c1), pt.gamma1, pt.f1, 0.0});
        pt.n2 = excitationNumber({std::abs(final.c2), pt.gamma2, pt.f2, 0.0});
        pt.phi1 = std::abs(final.c1) > 0.0 ? std::arg(final.c1) : 0.0;
        pt.phi2 = std::abs(final.c2) > 0.0 ? std::arg(final.c2) : 0.0;
        const double delta = std::abs(system.delta);
        pt.jOverDelta = delta > 0.0 ? std::abs(coupling) / delta : (std::abs(coupling) > 0.0 ? INFINITY : 0.0);
        pt.coupled = pt.jOverDelta > 1.0;
    });
    return points;
}

void writeSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "P_mW,N1,N2,f1_Hz,f2_Hz,G1_Hz,G2_Hz,phi1_rad,phi2_rad,J_over_Delta_abs,regime_label\n";
    for (const SweepPoint& p : points) {
        out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{}\n",
                           p.power * 1e3, p.n1, p.n2, p.f1, p.f2, p.gamma1, p.gamma2, p.phi1, p.phi2, p.jOverDelta,
                           p.coupled ? "coupled" : "independent");
    }
}

}  // namespace spindiff
