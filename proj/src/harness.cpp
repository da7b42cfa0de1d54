#include "spindiff/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "spindiff/errors.hpp"
#include "spindiff/special_functions.hpp"

namespace spindiff {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMilli = 1e-3;
constexpr double kHighPowerThreshold = 0.8e-3;  // W
constexpr double kExchangeFloor = 0.01;

std::ofstream openCsv(const std::filesystem::path& dir, const std::string& name, const Scenario& scenario,
                      RunOutput& output) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = dir / name;
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    out << "# scenario_hash=" << scenario.hash << '\n';
    output.files.push_back(path);
    return out;
}

void requireSphere(const Scenario& scenario, const std::string& what) {
    if (scenario.cell.geometry != Geometry::sphere) {
        throw ConfigError(what + " needs cell.geometry = sphere", {"cell.geometry"});
    }
}

double toCelsius(double kelvin) { return kelvin - 273.15; }

double wrapPhase(double phi) { return std::remainder(phi, kTwoPi); }

// Modes shown in slit images and beam scans.
std::vector<Mode> imagingModes(const Scenario& scenario, const ModeRates& rates) {
    if (scenario.cell.geometry == Geometry::box) {
        return {makeBoxMode(scenario.cell.box, 1, 1, 1, rates), makeBoxMode(scenario.cell.box, 1, 1, 2, rates),
                makeBoxMode(scenario.cell.box, 1, 1, 3, rates)};
    }
    return {makeSphereMode(scenario.cell, 0, 0, 0, rates), makeSphereMode(scenario.cell, 1, 0, 0, rates),
            makeSphereMode(scenario.cell, 0, 1, 0, rates)};
}

void writeSlitImages(const Scenario& scenario, const std::filesystem::path& dir, const std::string& name, int threads,
                     RunOutput& output) {
    const ModeRates rates = scenarioRates(scenario, scenario.temperature);
    const std::vector<Mode> modes = imagingModes(scenario, rates);
    const double limit =
        scenario.cell.geometry == Geometry::box ? 0.5 * scenario.cell.box.lz : scenario.cell.radius;
    SlitSpec slit = scenario.slit;
    std::erase_if(slit.positions, [&](double z0) { return std::abs(z0) > limit; });
    if (slit.positions.empty()) {
        throw ConfigError("no slit position lies inside the cell", {"slit.start", "slit.stop"});
    }

    std::vector<std::vector<double>> images(modes.size());
    parallelFor(modes.size(), threads,
                [&](std::size_t i) { images[i] = slitImage(modes[i], scenario.probe, slit, scenario.cell); });

    std::vector<ImagingRow> rows;
    for (std::size_t p = 0; p < slit.positions.size(); ++p) {
        for (std::size_t m = 0; m < modes.size(); ++m) {
            rows.push_back({slit.positions[p], modes[m].index.label(), images[m][p], modes[m].frequency / kTwoPi,
                            modes[m].decayRate / kTwoPi});
        }
    }
    std::ofstream out = openCsv(dir, name, scenario, output);
    writeImagingCsv(out, rows);

    // Report the first node of the radial mode, if the scan resolves it.
    const std::vector<double>& radial = images[1];
    for (std::size_t p = 1; p < radial.size(); ++p) {
        if (slit.positions[p] > 0.0 && (radial[p - 1] < 0.0) != (radial[p] < 0.0)) {
            const double t = radial[p - 1] / (radial[p - 1] - radial[p]);
            const double node = slit.positions[p - 1] + t * (slit.positions[p] - slit.positions[p - 1]);
            output.summary.push_back(fmt::format("{} image node at z0 = {:.3f} mm", modes[1].index.label(), node / kMilli));
            break;
        }
    }
}

std::vector<SweepPoint> sweepWithSummary(const SweepConfig& config, const std::string& label, RunOutput& output) {
    std::vector<SweepPoint> points = pumpSweep(config);
    const CorrelationReport report = correlationReport(points, kHighPowerThreshold);
    output.summary.push_back(fmt::format("{}: spearman(N1, N2) = {:.3f} overall, {:.3f} above 0.8 mW, {} regime flips",
                                         label, report.overall.rho, report.above.rho, report.regimeFlips));
    return points;
}

void writeSpearmanCsv(std::ostream& out, const CorrelationReport& report, std::size_t total) {
    out << "subset,threshold_mW,points,rho,defined,regime_flips\n";
    out << fmt::format("all,0,{},{:.12g},{},{}\n", total, report.overall.rho, report.overall.defined ? 1 : 0,
                       report.regimeFlips);
    out << fmt::format("above_threshold,{:.12g},{},{:.12g},{},{}\n", kHighPowerThreshold / kMilli, report.aboveCount,
                       report.above.rho, report.above.defined ? 1 : 0, report.regimeFlips);
}

void figure2(const Scenario& scenario, const std::filesystem::path& dir, int threads, RunOutput& output) {
    requireSphere(scenario, "fig2");
    writeSlitImages(scenario, dir, "fig2_slit_images.csv", threads, output);

    struct Row {
        double temperature, radius, k[3], gamma[3], diffusion[3];
    };
    std::vector<Row> rows(scenario.temperatures.size());
    const double homogeneous = totalDecoherenceRate(scenario.rates);
    parallelFor(rows.size(), threads, [&](std::size_t i) {
        const double t = scenario.temperatures[i];
        CellSpec cell = scenario.cell;
        cell.radius = effectiveRadius(t, scenario.cell, scenario.gas, scenario.wallEta, scenario.wallReferenceDensity);
        const std::vector<double> k = solveSphereRoots(cell, 0, 3);
        const double d = diffusionCoefficient(t, scenario.gas);
        Row& row = rows[i];
        row.temperature = t;
        row.radius = cell.radius;
        for (int m = 0; m < 3; ++m) {
            row.k[m] = k[static_cast<std::size_t>(m)];
            row.diffusion[m] = d * row.k[m] * row.k[m];
            row.gamma[m] = row.diffusion[m] + homogeneous;
        }
    });
    {
        std::ofstream out = openCsv(dir, "fig2_linewidths.csv", scenario, output);
        out << "T_C,R_eff_mm,G1_Hz,G2_Hz,G3_Hz,G2_over_G1,G3_over_G1,diffusion_ratio21,diffusion_ratio31,"
               "k2_over_k1,k3_over_k1\n";
        for (const Row& r : rows) {
            out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.4f},{:.4f},{:.12g},{:.12g}\n",
                               toCelsius(r.temperature), r.radius / kMilli, r.gamma[0] / kTwoPi, r.gamma[1] / kTwoPi,
                               r.gamma[2] / kTwoPi, r.gamma[1] / r.gamma[0], r.gamma[2] / r.gamma[0],
                               r.diffusion[1] / r.diffusion[0], r.diffusion[2] / r.diffusion[0], r.k[1] / r.k[0],
                               r.k[2] / r.k[0]);
        }
    }
    output.summary.push_back(fmt::format("fig2: diffusion ratios {:.3f}, {:.3f} at {:.1f} C", rows.front().diffusion[1] / rows.front().diffusion[0],
                                         rows.front().diffusion[2] / rows.front().diffusion[0],
                                         toCelsius(rows.front().temperature)));

    std::vector<double> paths(61);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        paths[i] = 0.05e-3 * static_cast<double>(i);
    }
    const std::vector<WallScanRow> scan = wallScan(scenario.cell, paths);
    std::ofstream out = openCsv(dir, "fig2_wall_scan.csv", scenario, output);
    out << "lambda_mm,wall_factor,k2_over_k1,k3_over_k1,diffusion_ratio21,diffusion_ratio31\n";
    for (const WallScanRow& r : scan) {
        out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", r.meanFreePath / kMilli, r.wallFactor,
                           r.k2OverK1, r.k3OverK1, r.ratio21, r.ratio31);
    }
}

void figure3(const Scenario& scenario, const std::filesystem::path& dir, int threads, RunOutput& output) {
    const std::vector<SweepPoint> points = sweepWithSummary(scenario.sweepConfig(threads), "fig3 sweep", output);
    const double larmor = scenario.larmorFrequency / kTwoPi;
    {
        std::ofstream out = openCsv(dir, "fig3_power.csv", scenario, output);
        out << "P_mW,f1_Hz,f2_Hz,G1_Hz,G2_Hz,shift1_Hz,shift2_Hz,broadening1_Hz,broadening2_Hz\n";
        for (const SweepPoint& p : points) {
            out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n",
                               p.power / kMilli, p.f1, p.f2, p.gamma1, p.gamma2, p.f1 - larmor, p.f2 - larmor,
                               p.gamma1 - points.front().gamma1, p.gamma2 - points.front().gamma2);
        }
    }
    std::vector<double> power, f1, f2, g1, g2;
    for (const SweepPoint& p : points) {
        power.push_back(p.power / kMilli);
        f1.push_back(p.f1);
        f2.push_back(p.f2);
        g1.push_back(p.gamma1);
        g2.push_back(p.gamma2);
    }
    constexpr double kTail = 0.5;
    std::ofstream out = openCsv(dir, "fig3_asymptotic.csv", scenario, output);
    out << "quantity,tail_fraction,slope1_Hz_per_mW,slope2_Hz_per_mW,slope_ratio\n";
    auto emit = [&](const char* name, const std::vector<double>& a, const std::vector<double>& b) {
        const LinearFit fa = asymptoticLinearFit(power, a, kTail);
        const LinearFit fb = asymptoticLinearFit(power, b, kTail);
        out << fmt::format("{},{},{:.12g},{:.12g},{:.12g}\n", name, kTail, fa.slope, fb.slope, fb.slope / fa.slope);
        output.summary.push_back(fmt::format("fig3: {} slope ratio mode2/mode1 = {:.3f}", name, fb.slope / fa.slope));
    };
    emit("frequency", f1, f2);
    emit("linewidth", g1, g2);
}

void figure4(const Scenario& scenario, const std::filesystem::path& dir, int threads, RunOutput& output) {
    const SweepConfig config = scenario.sweepConfig(threads);
    const std::vector<SweepPoint> points = sweepWithSummary(config, "fig4 sweep", output);
    const ModePair modes = couplingModes(config.cell, scenarioRates(scenario, scenario.temperature));
    std::ofstream out = openCsv(dir, "fig4_splitting.csv", scenario, output);
    out << "P_mW,displacement_mm,J_abs_per_s,J_over_Delta_abs,freq_split_Hz,linewidth_split_Hz,phase_split_rad,"
           "regime_label\n";
    for (const SweepPoint& p : points) {
        const Complex c1 = p.gamma1 > 0.0 ? std::polar(p.n1 / (std::numbers::pi * p.gamma1), p.phi1) : Complex{};
        const Complex c2 = p.gamma2 > 0.0 ? std::polar(p.n2 / (std::numbers::pi * p.gamma2), p.phi2) : Complex{};
        const double norm = std::norm(c1) + std::norm(c2);
        const double displacement = norm > 0.0 ? 2.0 * std::real(std::conj(c1) * c2) * modes.zOverlap / norm : 0.0;
        const EigenPair eig = eigenvalues(p.system);
        out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{}\n", p.power / kMilli,
                           displacement / kMilli, std::abs(p.coupling), p.jOverDelta,
                           (eig.values[0].imag() - eig.values[1].imag()) / kTwoPi,
                           (eig.values[0].real() - eig.values[1].real()) / kTwoPi, wrapPhase(p.phi2 - p.phi1),
                           p.coupled ? "coupled" : "independent");
    }
}

void figure5(const Scenario& scenario, const std::filesystem::path& dir, int threads, RunOutput& output) {
    const SweepConfig config = scenario.sweepConfig(threads);
    const std::vector<SweepPoint> points = sweepWithSummary(config, "fig5", output);
    {
        std::ofstream out = openCsv(dir, "fig5_sweep.csv", scenario, output);
        writeSweepCsv(out, points);
    }
    {
        std::ofstream out = openCsv(dir, "fig5_excitations.csv", scenario, output);
        out << "P_mW,N1,N2,normalized_difference,model_f1_Hz,model_f2_Hz\n";
        for (const SweepPoint& p : points) {
            const double total = p.n1 + p.n2;
            const EigenPair eig = eigenvalues(p.system);
            const double frame = 0.5 * (p.f1 + p.f2);
            out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", p.power / kMilli, p.n1, p.n2,
                               total > 0.0 ? (p.n1 - p.n2) / total : 0.0, frame + eig.values[0].imag() / kTwoPi,
                               frame + eig.values[1].imag() / kTwoPi);
        }
    }
    {
        std::ofstream out = openCsv(dir, "fig5_spearman.csv", scenario, output);
        writeSpearmanCsv(out, correlationReport(points, kHighPowerThreshold), points.size());
    }
    const ModePair modes = couplingModes(config.cell, scenarioRates(scenario, scenario.temperature));
    const double gamma1 = modes.first.decayRate;
    const std::vector<ExchangeSample> trace = exchangeTrace(gamma1, 5.0 / gamma1, 1001);
    std::ofstream out = openCsv(dir, "fig5_exchange.csv", scenario, output);
    out << "t_s,c1_abs2,c2_abs2\n";
    for (const ExchangeSample& s : trace) {
        out << fmt::format("{:.12g},{:.12g},{:.12g}\n", s.time, s.population1, s.population2);
    }
    output.summary.push_back(
        fmt::format("fig5: {} exchange extrema before 1% decay", countExchangeExtrema(trace, kExchangeFloor)));
}

void supplementBeam(const Scenario& scenario, const std::filesystem::path& dir, int threads, RunOutput& output) {
    requireSphere(scenario, "suppl-beam");
    const std::vector<BeamScanRow> rows = beamScan(scenario, threads);
    std::ofstream out = openCsv(dir, "suppl_beam.csv", scenario, output);
    out << "sigma_mm,I_s000_W_m2,I_s100_W_m2,I_s01z_W_m2,ratio_s100,ratio_s01z\n";
    double best = 0.0;
    for (const BeamScanRow& r : rows) {
        out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", r.waist / kMilli, r.fundamental,
                           r.radial, r.dipole, r.radial / r.fundamental, r.dipole / r.fundamental);
        best = std::max({best, r.radial / r.fundamental, r.dipole / r.fundamental});
    }
    output.summary.push_back(fmt::format("suppl-beam: largest effective-intensity ratio {:.3f}", best));
}

void supplementNoNeon(const Scenario& scenario, const std::filesystem::path& dir, int threads, RunOutput& output) {
    const std::vector<SweepPoint> points =
        sweepWithSummary(scenario.noneonSweepConfig(threads), "suppl-noneon", output);
    {
        std::ofstream out = openCsv(dir, "suppl_noneon_sweep.csv", scenario, output);
        writeSweepCsv(out, points);
    }
    std::ofstream out = openCsv(dir, "suppl_noneon_spearman.csv", scenario, output);
    writeSpearmanCsv(out, correlationReport(points, kHighPowerThreshold), points.size());
}

}  // namespace

ModeRates scenarioRates(const Scenario& scenario, double temperature) {
    return {diffusionCoefficient(temperature, scenario.gas), totalDecoherenceRate(scenario.rates),
            scenario.larmorFrequency};
}

std::vector<WallScanRow> wallScan(const CellSpec& cell, std::span<const double> meanFreePaths) {
    std::vector<WallScanRow> rows;
    rows.reserve(meanFreePaths.size());
    for (double path : meanFreePaths) {
        CellSpec c = cell;
        c.meanFreePath = path;
        const std::vector<double> k = solveSphereRoots(c, 0, 3);
        const double k1 = k[0] * k[0];
        rows.push_back({path, robinWallFactor(c, 1.0 / c.radius), k[1] / k[0], k[2] / k[0], k[1] * k[1] / k1,
                        k[2] * k[2] / k1});
    }
    return rows;
}

std::vector<BeamScanRow> beamScan(const Scenario& scenario, int threads) {
    const ModeRates rates = scenarioRates(scenario, scenario.temperature);
    const std::vector<Mode> modes = imagingModes(scenario, rates);
    std::vector<BeamScanRow> rows(scenario.waists.size());
    parallelFor(rows.size(), threads, [&](std::size_t i) {
        BeamSpec beam = scenario.pump;
        beam.waist = scenario.waists[i];
        beam.power = 1e-3;
        beam.attenuation = 0.0;
        rows[i] = {beam.waist, effectiveIntensity(beam, modes[0], scenario.cell),
                   effectiveIntensity(beam, modes[1], scenario.cell), effectiveIntensity(beam, modes[2], scenario.cell)};
    });
    return rows;
}

CorrelationReport correlationReport(const std::vector<SweepPoint>& points, double thresholdPower) {
    CorrelationReport report;
    std::vector<double> n1, n2, h1, h2;
    for (std::size_t i = 0; i < points.size(); ++i) {
        n1.push_back(points[i].n1);
        n2.push_back(points[i].n2);
        if (points[i].power > thresholdPower) {
            h1.push_back(points[i].n1);
            h2.push_back(points[i].n2);
        }
        if (i > 0 && points[i].coupled != points[i - 1].coupled) {
            ++report.regimeFlips;
        }
    }
    const SpearmanResult undefined{std::numeric_limits<double>::quiet_NaN(), false};
    report.overall = n1.size() >= 3 ? spearman(n1, n2) : undefined;
    report.above = h1.size() >= 3 ? spearman(h1, h2) : undefined;
    report.aboveCount = h1.size();
    return report;
}

std::vector<ExchangeSample> exchangeTrace(double gamma1, double horizon, int samples) {
    if (!(gamma1 > 0.0) || !(horizon > 0.0) || samples < 2) {
        throw DomainError("exchange trace needs gamma1 > 0, horizon > 0 and at least 2 samples");
    }
    const CoupledSystem system = buildSystem(0.0, 0.0, gamma1, 2.0 * gamma1, Complex(0.0, 8.0 * gamma1));
    std::vector<ExchangeSample> trace;
    trace.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double t = horizon * i / (samples - 1);
        const ModeAmplitudes c = evolve(system, {Complex(1.0, 0.0), Complex{}, 0.0}, t);
        trace.push_back({t, std::norm(c.c1), std::norm(c.c2)});
    }
    return trace;
}

int countExchangeExtrema(const std::vector<ExchangeSample>& trace, double floor) {
    if (trace.size() < 3) {
        return 0;
    }
    const double initial = trace.front().population1 + trace.front().population2;
    int extrema = 0;
    int lastKind = 0;  // +1 maximum, -1 minimum
    for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
        if (trace[i].population1 + trace[i].population2 < floor * initial) {
            break;
        }
        const double prev = trace[i - 1].population1 - trace[i - 1].population2;
        const double here = trace[i].population1 - trace[i].population2;
        const double next = trace[i + 1].population1 - trace[i + 1].population2;
        const int kind = here > prev && here >= next ? 1 : (here < prev && here <= next ? -1 : 0);
        if (kind != 0 && kind != lastKind) {
            ++extrema;
            lastKind = kind;
        }
    }
    return extrema;
}

RunOutput runModes(const Scenario& scenario, const std::filesystem::path& outDir) {
    RunOutput output;
    const ModeRates rates = scenarioRates(scenario, scenario.temperature);
    std::vector<Mode> modes;
    if (scenario.cell.geometry == Geometry::box) {
        for (const BoxRoot& root : solveBoxModes(scenario.cell.box, 12)) {
            modes.push_back(makeBoxMode(scenario.cell.box, root.index.nx, root.index.ny, root.index.nz, rates));
        }
    } else {
        modes = sphereModeCatalog(scenario.cell, kMaxAngularOrder, 3, rates);
    }
    std::ofstream out = openCsv(outDir, "modes.csv", scenario, output);
    writeModeCatalogCsv(out, modes, scenario.cell);
    output.summary.push_back(fmt::format("modes: {} entries, fundamental k = {:.6g} 1/m", modes.size(), modes.front().k));
    return output;
}

RunOutput runImage(const Scenario& scenario, const std::filesystem::path& outDir, int threads) {
    RunOutput output;
    writeSlitImages(scenario, outDir, "image.csv", threads, output);
    return output;
}

RunOutput runPumpSweep(const Scenario& scenario, const std::filesystem::path& outDir, int threads) {
    RunOutput output;
    const std::vector<SweepPoint> points = sweepWithSummary(scenario.sweepConfig(threads), "sweep-pump", output);
    std::ofstream out = openCsv(outDir, "sweep.csv", scenario, output);
    writeSweepCsv(out, points);
    return output;
}

RunOutput runCouple(const Scenario& scenario, const std::filesystem::path& outDir) {
    RunOutput output;
    const ModePair modes = couplingModes(scenario.cell, scenarioRates(scenario, scenario.temperature));
    const Complex j = couplingJ(scenario.coupling.gradient, scenario.gas.gyromagneticRatio, modes.first,
                                modes.second, scenario.cell);
    const CoupledSystem system =
        buildSystem(0.0, 0.0, modes.first.decayRate, modes.second.decayRate, j);
    const EigenPair eig = eigenvalues(system);
    {
        std::ofstream out = openCsv(outDir, "couple.csv", scenario, output);
        out << "quantity,value\n";
        out << fmt::format("mode1,{}\nmode2,{}\n", modes.first.index.label(), modes.second.index.label());
        out << fmt::format("z_overlap_mm,{:.12g}\n", modes.zOverlap / kMilli);
        out << fmt::format("J_re_per_s,{:.12g}\nJ_im_per_s,{:.12g}\n", j.real(), j.imag());
        out << fmt::format("Delta_abs_per_s,{:.12g}\n", std::abs(system.delta));
        out << fmt::format("J_over_Delta_abs,{:.12g}\n", std::abs(j) / std::abs(system.delta));
        out << fmt::format("lambda1_re_per_s,{:.12g}\nlambda1_im_per_s,{:.12g}\n", eig.values[0].real(),
                           eig.values[0].imag());
        out << fmt::format("lambda2_re_per_s,{:.12g}\nlambda2_im_per_s,{:.12g}\n", eig.values[1].real(),
                           eig.values[1].imag());
        out << fmt::format("exceptional,{}\n", eig.exceptional ? 1 : 0);
    }
    const double horizon = 5.0 / modes.first.decayRate;
    std::ofstream out = openCsv(outDir, "couple_trace.csv", scenario, output);
    out << "t_s,c1_abs2,c2_abs2\n";
    constexpr int kSamples = 401;
    for (int i = 0; i < kSamples; ++i) {
        const double t = horizon * i / (kSamples - 1);
        const ModeAmplitudes c = evolve(system, {Complex(1.0, 0.0), Complex{}, 0.0}, t);
        out << fmt::format("{:.12g},{:.12g},{:.12g}\n", t, std::norm(c.c1), std::norm(c.c2));
    }
    output.summary.push_back(fmt::format("couple: |J| = {:.6g} 1/s, |J/Delta| = {:.4g}", std::abs(j),
                                         std::abs(j) / std::abs(system.delta)));
    return output;
}

RunOutput runFit(const Scenario& scenario, const std::filesystem::path& spectrumCsv, int components,
                 const std::filesystem::path& outDir) {
    RunOutput output;
    std::ifstream in(spectrumCsv);
    if (!in) {
        throw ConfigError(fmt::format("cannot open spectrum {}", spectrumCsv.string()));
    }
    const Spectrum spectrum = readSpectrumCsv(in);
    const FitResult fit = fitLorentzians(spectrum, components);
    std::ofstream out = openCsv(outDir, "fit.csv", scenario, output);
    writeFitCsv(out, fit);
    output.summary.push_back(fmt::format("fit: {} components, residual rms {:.6g} after {} iterations{}", components,
                                         fit.residualRms, fit.iterations,
                                         fit.capacityWarning ? " (more components than resolvable peaks)" : ""));
    return output;
}

const std::vector<std::string>& figureTags() {
    static const std::vector<std::string> tags{"fig2", "fig3", "fig4", "fig5", "suppl-beam", "suppl-noneon"};
    return tags;
}

RunOutput runFigure(const std::string& tag, const Scenario& scenario, const std::filesystem::path& outDir,
                    int threads) {
    RunOutput output;
    try {
        if (tag == "fig2") {
            figure2(scenario, outDir, threads, output);
        } else if (tag == "fig3") {
            figure3(scenario, outDir, threads, output);
        } else if (tag == "fig4") {
            figure4(scenario, outDir, threads, output);
        } else if (tag == "fig5") {
            figure5(scenario, outDir, threads, output);
        } else if (tag == "suppl-beam") {
            supplementBeam(scenario, outDir, threads, output);
        } else if (tag == "suppl-noneon") {
            supplementNoNeon(scenario, outDir, threads, output);
        } else {
            throw ConfigError(fmt::format("unknown figure tag '{}'", tag));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error(fmt::format("{} (scenario {}): {}", tag, scenario.hash, e.what()));
    }
    return output;
}

}  // namespace spindiff
