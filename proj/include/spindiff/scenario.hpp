#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spindiff/pump_sweep.hpp"

namespace spindiff {

/// Physical dimension of a configuration value; decides which unit suffixes
/// are accepted and what the stored SI (or torr) value is.
enum class Dimension { none, length, pressure, power, temperature, frequency, time, rate, text };

struct ScenarioKey {
    std::string name;
    Dimension dimension = Dimension::none;
    std::string defaultValue;  // as it would be written in the file
    std::string description;
};

/// Every accepted key with its default, in documentation order.
const std::vector<ScenarioKey>& scenarioKeys();

/// Settings of the decoupled rectangular-cell comparison.
struct NoNeonSpec {
    double temperature = 353.15;  // K
    double bufferPressure = 200.0;  // torr
    double quenchPressure = 0.0;    // torr
    double jScale = 0.0;
    bool attenuationFromOpticalThickness = false;
    double attenuation = 200.0;  // 1/m
};

struct Scenario {
    CellSpec cell;
    GasSpec gas;
    RateTable rates;
    BeamSpec pump;
    double saturationPower = 0.2e-3;  // W
    bool attenuationFromOpticalThickness = true;
    BeamSpec probe;
    SlitSpec slit;
    double temperature = 333.15;        // K, operating point of the sweeps
    std::vector<double> temperatures;   // K, fig2 linewidth curves
    std::vector<double> powers;         // W
    std::vector<double> waists;         // m, beam-size scan
    CouplingConstants coupling;
    double interrogationTime = 1.0;  // s
    double larmorFrequency = 0.0;    // rad/s
    double wallEta = 0.0;
    double wallReferenceDensity = kDirtyWallReferenceDensity;
    NoNeonSpec noneon;
    std::uint64_t seed = 1;
    int fitComponents = 2;

    /// One `key = value` line per key, sorted, numbers in SI units (pressures
    /// in torr) with 17 significant digits.
    std::string canonical;
    /// FNV-1a 64 of `canonical`, as 16 hex digits.
    std::string hash;

    /// Sweep of the spherical cell at the operating temperature.
    [[nodiscard]] SweepConfig sweepConfig(int threads = 1) const;
    /// Decoupled sweep of the rectangular cell.
    [[nodiscard]] SweepConfig noneonSweepConfig(int threads = 1) const;
};

/// Key/value pairs applied after the file and the environment, e.g. from
/// command-line flags. Values use the file syntax, units included.
using ScenarioOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parse a flat `key = value [unit]` stream. `source` names the stream in
/// error messages. Environment variables SPINDIFF_<KEY> (dots replaced by
/// underscores, upper case) override file entries.
Scenario parseScenario(std::istream& in, const std::string& source, const ScenarioOverrides& overrides = {});

/// As parseScenario; an empty path yields the defaults (plus overrides).
Scenario loadScenario(const std::filesystem::path& path, const ScenarioOverrides& overrides = {});

/// Environment variable consulted for a key.
std::string environmentName(const std::string& key);

}  // namespace spindiff
