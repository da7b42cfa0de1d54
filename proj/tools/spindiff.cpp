#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "spindiff/errors.hpp"
#include "spindiff/harness.hpp"
#include "spindiff/scenario.hpp"
#include "spindiff/selftest.hpp"

namespace {

struct GlobalOptions {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

spindiff::Scenario scenarioFrom(const GlobalOptions& options) {
    spindiff::ScenarioOverrides overrides;
    if (options.seed) {
        overrides.emplace_back("seed", std::to_string(*options.seed));
    }
    return spindiff::loadScenario(options.config, overrides);
}

void report(const spindiff::RunOutput& output) {
    for (const auto& line : output.summary) {
        std::cout << line << '\n';
    }
    for (const auto& file : output.files) {
        std::cout << "wrote " << file.string() << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-diffusion mode simulation and analysis"};
    app.require_subcommand(1);
    GlobalOptions options;
    app.add_option("--config", options.config, "Scenario file (key = value [unit])");
    app.add_option("--out", options.out, "Output directory for CSV files");
    app.add_option("--seed", options.seed, "Override the scenario seed");
    app.add_option("--threads", options.threads, "Worker threads for sweeps")->check(CLI::Range(1, 256));

    auto* modes = app.add_subcommand("modes", "Mode catalogue of the configured cell");
    auto* image = app.add_subcommand("image", "Slit-scanned probe images of the low modes");
    auto* sweep = app.add_subcommand("sweep-pump", "Pump-power sweep of the two-mode model");
    auto* couple = app.add_subcommand("couple", "Gradient coupling, eigenvalues and exchange trace");

    auto* fit = app.add_subcommand("fit", "Fit Lorentzians to a spectrum CSV (f_Hz, X, Y)");
    std::string spectrum;
    std::optional<int> components;
    fit->add_option("csv", spectrum, "Spectrum file")->required()->check(CLI::ExistingFile);
    fit->add_option("--components", components, "Number of Lorentzians (default: fit.components)")
        ->check(CLI::PositiveNumber);

    auto* figure = app.add_subcommand("figure", "Write the CSV data of one figure");
    std::string tag;
    figure->add_option("tag", tag, "Figure tag")->required()->check(CLI::IsMember(spindiff::figureTags()));

    auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
    std::string fault = "none";
    selftest->add_option("--inject-fault", fault, "Deliberately corrupt a component")
        ->check(CLI::IsMember({"none", "bessel"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (selftest->parsed()) {
            const auto result = spindiff::runSelfTest(fault == "bessel" ? spindiff::SelfTestFault::bessel
                                                                        : spindiff::SelfTestFault::none);
            spindiff::printSelfTestReport(std::cout, result);
            return result.passed() ? 0 : 1;
        }
        const spindiff::Scenario scenario = scenarioFrom(options);
        std::cout << "scenario " << scenario.hash << '\n';
        if (modes->parsed()) {
            report(spindiff::runModes(scenario, options.out));
        } else if (image->parsed()) {
            report(spindiff::runImage(scenario, options.out, options.threads));
        } else if (sweep->parsed()) {
            report(spindiff::runPumpSweep(scenario, options.out, options.threads));
        } else if (couple->parsed()) {
            report(spindiff::runCouple(scenario, options.out));
        } else if (fit->parsed()) {
            report(spindiff::runFit(scenario, spectrum, components.value_or(scenario.fitComponents), options.out));
        } else if (figure->parsed()) {
            report(spindiff::runFigure(tag, scenario, options.out, options.threads));
        }
    } catch (const spindiff::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
