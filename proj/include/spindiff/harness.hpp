#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spindiff/scenario.hpp"
#include "spindiff/signal_fit.hpp"

namespace spindiff {

/// Files written by a subcommand plus one-line summaries for the console.
struct RunOutput {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;
};

/// Diffusion coefficient, homogeneous rate and Larmor frequency at temperature T.
ModeRates scenarioRates(const Scenario& scenario, double temperature);

struct WallScanRow {
    double meanFreePath = 0.0;  // m
    double wallFactor = 0.0;    // robinWallFactor at k = 1/R
    double k2OverK1 = 0.0;
    double k3OverK1 = 0.0;
    double ratio21 = 0.0;  // diffusion-only decay-rate ratios of s100, s200 to s000
    double ratio31 = 0.0;
};

/// First three l = 0 roots across mean free paths, other cell parameters fixed.
std::vector<WallScanRow> wallScan(const CellSpec& cell, std::span<const double> meanFreePaths);

struct BeamScanRow {
    double waist = 0.0;        // m
    double fundamental = 0.0;  // I_eff of s000, W/m^2
    double radial = 0.0;       // I_eff of s100
    double dipole = 0.0;       // I_eff of the z-oriented l = 1 mode
};

/// Effective intensities at 1 mW, no attenuation, for every waist of the scan.
std::vector<BeamScanRow> beamScan(const Scenario& scenario, int threads = 1);

struct CorrelationReport {
    SpearmanResult overall;
    SpearmanResult above;  // powers strictly above the threshold
    std::size_t aboveCount = 0;
    int regimeFlips = 0;
};

CorrelationReport correlationReport(const std::vector<SweepPoint>& points, double thresholdPower);

struct ExchangeSample {
    double time = 0.0;
    double population1 = 0.0;  // |c1|^2
    double population2 = 0.0;
};

/// |c1|^2, |c2|^2 from c = (1, 0) with w1 = w2, G2 = 2 G1 and J = i 8 G1,
/// sampled uniformly over [0, horizon].
std::vector<ExchangeSample> exchangeTrace(double gamma1, double horizon, int samples);

/// Alternating extrema of |c1|^2 - |c2|^2 before the total population first
/// drops below `floor` times its initial value.
int countExchangeExtrema(const std::vector<ExchangeSample>& trace, double floor);

RunOutput runModes(const Scenario& scenario, const std::filesystem::path& outDir);
RunOutput runImage(const Scenario& scenario, const std::filesystem::path& outDir, int threads);
RunOutput runPumpSweep(const Scenario& scenario, const std::filesystem::path& outDir, int threads);
RunOutput runCouple(const Scenario& scenario, const std::filesystem::path& outDir);
RunOutput runFit(const Scenario& scenario, const std::filesystem::path& spectrumCsv, int components,
                 const std::filesystem::path& outDir);

/// fig2, fig3, fig4, fig5, suppl-beam, suppl-noneon.
const std::vector<std::string>& figureTags();
RunOutput runFigure(const std::string& tag, const Scenario& scenario, const std::filesystem::path& outDir,
                    int threads);

}  // namespace spindiff
