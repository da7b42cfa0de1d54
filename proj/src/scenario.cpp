#include "spindiff/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "spindiff/errors.hpp"

namespace spindiff {
namespace {

constexpr double kCelsiusOffset = 273.15;
constexpr double kTwoPi = 6.283185307179586;

using D = Dimension;

struct Unit {
    const char* name;
    double scale;
    double offset;
};

const std::map<D, std::vector<Unit>>& unitTable() {
    static const std::map<D, std::vector<Unit>> table{
        {D::length, {{"m", 1.0, 0.0}, {"cm", 1e-2, 0.0}, {"mm", 1e-3, 0.0}, {"um", 1e-6, 0.0}}},
        {D::pressure,
         {{"torr", 1.0, 0.0}, {"Pa", 1.0 / kPascalPerTorr, 0.0}, {"mbar", 100.0 / kPascalPerTorr, 0.0}}},
        {D::power, {{"W", 1.0, 0.0}, {"mW", 1e-3, 0.0}, {"uW", 1e-6, 0.0}}},
        {D::temperature, {{"K", 1.0, 0.0}, {"C", 1.0, kCelsiusOffset}}},
        {D::frequency, {{"Hz", 1.0, 0.0}, {"kHz", 1e3, 0.0}}},
        {D::time, {{"s", 1.0, 0.0}, {"ms", 1e-3, 0.0}}},
        {D::rate, {{"1/s", 1.0, 0.0}, {"s^-1", 1.0, 0.0}}},
    };
    return table;
}

}  // namespace

const std::vector<ScenarioKey>& scenarioKeys() {
    static const std::vector<ScenarioKey> keys{
        {"cell.geometry", D::text, "sphere", "sphere | box"},
        {"cell.radius", D::length, "10 mm", "sphere radius"},
        {"cell.mean_free_path", D::length, "0 m", "mean free path in the Robin wall factor"},
        {"cell.wall_parameter", D::none, "1", "wall parameter N > 0"},
        {"box.lx", D::length, "4 mm", "box edge along x"},
        {"box.ly", D::length, "4 mm", "box edge along y"},
        {"box.lz", D::length, "2 mm", "box edge along z"},
        {"gas.buffer", D::pressure, "500 torr", "buffer-gas pressure"},
        {"gas.quench", D::pressure, "20 torr", "quench-gas pressure"},
        {"gas.vapor_a", D::none, "7.046", "A in log10(P/torr) = A - B/T"},
        {"gas.vapor_b", D::none, "3830", "B in log10(P/torr) = A - B/T, kelvin"},
        {"gas.d_ref", D::none, "2e-5", "diffusion coefficient at 760 torr and 273.15 K, m^2/s"},
        {"gas.cross_section", D::none, "1e-16", "on-resonance cross-section, m^2"},
        {"gas.k_se", D::none, "1", "spin-exchange coefficient of the magnetization proxy"},
        {"gas.gyromagnetic_ratio", D::none, "2.2e10", "rad/s/T"},
        {"rates.sd_ne", D::rate, "1", "spin destruction by the buffer gas"},
        {"rates.sd_n2", D::rate, "0", "spin destruction by the quench gas"},
        {"rates.sd_cs", D::rate, "0", "alkali-alkali spin destruction"},
        {"rates.se_ne", D::rate, "0", "spin exchange with the buffer gas"},
        {"rates.se_cs", D::rate, "0", "alkali-alkali spin exchange"},
        {"rates.pumping", D::rate, "0", "fixed pumping rate R_P"},
        {"rates.gradient", D::rate, "0", "gradient relaxation"},
        {"rates.epsilon", D::none, "1", "slowing-down factor"},
        {"rates.q_se", D::none, "1", "spin-exchange broadening factor"},
        {"pump.waist", D::length, "3 mm", "pump intensity sigma"},
        {"pump.offset_x", D::length, "0 m", "pump centre x"},
        {"pump.offset_y", D::length, "0 m", "pump centre y"},
        {"pump.attenuation", D::none, "0", "fixed attenuation, 1/m (used when alpha_from_b0 = false)"},
        {"pump.alpha_from_b0", D::none, "true", "tie attenuation to b0/(2R)(1 - p_A)"},
        {"pump.p_sat", D::power, "0.2 mW", "saturation power of p_A"},
        {"probe.waist", D::length, "3 mm", "probe intensity sigma"},
        {"probe.offset_y", D::length, "0 m", "probe centre y"},
        {"probe.offset_z", D::length, "0 m", "probe centre z"},
        {"slit.width", D::length, "1 mm", "slit width"},
        {"slit.start", D::length, "-8 mm", "first slit position"},
        {"slit.stop", D::length, "8 mm", "last slit position"},
        {"slit.count", D::none, "33", "number of slit positions"},
        {"temperature.operating", D::temperature, "60 C", "temperature of the pump sweeps"},
        {"temperature.start", D::temperature, "40 C", "first point of the temperature grid"},
        {"temperature.stop", D::temperature, "90 C", "last point of the temperature grid"},
        {"temperature.count", D::none, "11", "temperature grid size"},
        {"power.start", D::power, "0 mW", "first pump power"},
        {"power.stop", D::power, "7 mW", "last pump power"},
        {"power.count", D::none, "36", "power grid size"},
        {"beam_scan.start", D::length, "0.5 mm", "smallest waist of the beam-size scan"},
        {"beam_scan.stop", D::length, "10 mm", "largest waist of the beam-size scan"},
        {"beam_scan.count", D::none, "20", "waist grid size"},
        {"coupling.j_scale", D::none, "1e-17", "|J| = j_scale N_A p_A, m^3/s"},
        {"coupling.g_re", D::none, "5e-7", "real part of the gradient G, T/m"},
        {"coupling.g_im", D::none, "0", "imaginary part of G, T/m"},
        {"coupling.kappa_shift", D::none, "2.5", "light shift per effective intensity, rad/s per W/m^2"},
        {"coupling.kappa_broad", D::none, "0.75", "broadening per effective intensity, 1/s per W/m^2"},
        {"coupling.kappa_se", D::none, "1e-18", "spin-exchange shift per unit magnetization proxy, rad/s"},
        {"coupling.eta1", D::rate, "1", "gain coefficient of the first mode"},
        {"coupling.eta2", D::rate, "1", "gain coefficient of the second mode"},
        {"dynamics.t_int", D::time, "1 s", "interrogation time"},
        {"dynamics.larmor", D::frequency, "1 kHz", "Larmor frequency added to reported frequencies"},
        {"wall.eta", D::none, "0", "dirty-wall coefficient of the effective radius"},
        {"wall.n_ref", D::none, "1e18", "dirty-wall reference density, 1/m^3"},
        {"noneon.temperature", D::temperature, "80 C", "rectangular-cell temperature"},
        {"noneon.buffer", D::pressure, "200 torr", "rectangular-cell buffer pressure"},
        {"noneon.quench", D::pressure, "0 torr", "rectangular-cell quench pressure"},
        {"noneon.j_scale", D::none, "0", "coupling scale in the rectangular cell"},
        {"noneon.alpha_from_b0", D::none, "false", "tie attenuation to b0 in the rectangular cell"},
        {"noneon.attenuation", D::none, "200", "fixed attenuation in the rectangular cell, 1/m"},
        {"fit.components", D::none, "2", "Lorentzian count of the fit subcommand"},
        {"seed", D::none, "1", "noise seed (unsigned 64-bit)"},
    };
    return keys;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

const ScenarioKey* findKey(const std::string& name) {
    const auto& keys = scenarioKeys();
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const ScenarioKey& k) { return k.name == name; });
    return it == keys.end() ? nullptr : &*it;
}

struct Entry {
    std::string text;
    std::string origin;  // "line 12 of x.cfg", "SPINDIFF_X", "default"
};

// Converts one entry to its canonical text: SI numbers with 17 digits,
// booleans as 0/1, the seed as a decimal integer, text verbatim.
std::string canonicalValue(const ScenarioKey& key, const Entry& entry) {
    const std::string& text = entry.text;
    auto fail = [&](const std::string& why) {
        throw ConfigError(fmt::format("{}: {} = '{}': {}", entry.origin, key.name, text, why), {key.name});
    };
    if (key.dimension == D::text) {
        if (key.name == "cell.geometry" && text != "sphere" && text != "box") {
            fail("expected sphere or box");
        }
        return text;
    }
    if (key.name == "seed") {
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            fail("expected an unsigned 64-bit integer");
        }
        return std::to_string(seed);
    }
    if (text == "true" || text == "false") {
        if (key.dimension != D::none) {
            fail("boolean given for a dimensioned key");
        }
        return text == "true" ? "1" : "0";
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc()) {
        fail("not a number");
    }
    const std::string unit = trim(std::string_view(ptr, text.data() + text.size() - ptr));
    if (!unit.empty()) {
        const auto table = unitTable().find(key.dimension);
        if (table == unitTable().end()) {
            fail(fmt::format("unit '{}' given for a dimensionless key", unit));
        }
        const auto& units = table->second;
        const auto match = std::find_if(units.begin(), units.end(), [&](const Unit& u) { return unit == u.name; });
        if (match == units.end()) {
            std::string accepted;
            for (const Unit& u : units) {
                accepted += (accepted.empty() ? "" : ", ") + std::string(u.name);
            }
            fail(fmt::format("unit '{}' does not match this key (accepted: {})", unit, accepted));
        }
        value = value * match->scale + match->offset;
    }
    return fmt::format("{:.17g}", value);
}

std::vector<double> grid(double start, double stop, double count, const std::string& key) {
    if (count < 1.0 || count != std::floor(count)) {
        throw ConfigError(fmt::format("{} must be a positive integer", key), {key});
    }
    const int n = static_cast<int>(count);
    if (n > 1 && stop < start) {
        throw ConfigError(fmt::format("grid ending at {} must be ascending", key), {key});
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = n == 1 ? start : start + (stop - start) * i / (n - 1);
    }
    return out;
}

std::string fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

Scenario build(const std::map<std::string, std::string>& values) {
    auto num = [&](const std::string& key) { return std::stod(values.at(key)); };
    Scenario s;
    s.cell.geometry = values.at("cell.geometry") == "box" ? Geometry::box : Geometry::sphere;
    s.cell.radius = num("cell.radius");
    s.cell.meanFreePath = num("cell.mean_free_path");
    s.cell.wallParameter = num("cell.wall_parameter");
    s.cell.box = {num("box.lx"), num("box.ly"), num("box.lz")};

    s.gas.bufferPressure = num("gas.buffer");
    s.gas.quenchPressure = num("gas.quench");
    s.gas.vaporPressureA = num("gas.vapor_a");
    s.gas.vaporPressureB = num("gas.vapor_b");
    s.gas.diffusionRef = num("gas.d_ref");
    s.gas.crossSection = num("gas.cross_section");
    s.gas.spinExchangeCoeff = num("gas.k_se");
    s.gas.gyromagneticRatio = num("gas.gyromagnetic_ratio");

    s.rates.sdNeon = num("rates.sd_ne");
    s.rates.sdNitrogen = num("rates.sd_n2");
    s.rates.sdAlkali = num("rates.sd_cs");
    s.rates.seNeon = num("rates.se_ne");
    s.rates.seAlkali = num("rates.se_cs");
    s.rates.pumping = num("rates.pumping");
    s.rates.gradient = num("rates.gradient");
    s.rates.slowingDown = num("rates.epsilon");
    s.rates.seBroadening = num("rates.q_se");

    s.pump.axis = Axis::z;
    s.pump.waist = num("pump.waist");
    s.pump.offsetA = num("pump.offset_x");
    s.pump.offsetB = num("pump.offset_y");
    s.pump.attenuation = num("pump.attenuation");
    s.attenuationFromOpticalThickness = num("pump.alpha_from_b0") != 0.0;
    s.saturationPower = num("pump.p_sat");

    s.probe.axis = Axis::x;
    s.probe.waist = num("probe.waist");
    s.probe.offsetA = num("probe.offset_y");
    s.probe.offsetB = num("probe.offset_z");
    s.slit.width = num("slit.width");
    s.slit.positions = grid(num("slit.start"), num("slit.stop"), num("slit.count"), "slit.count");

    s.temperature = num("temperature.operating");
    s.temperatures = grid(num("temperature.start"), num("temperature.stop"), num("temperature.count"),
                          "temperature.count");
    s.powers = grid(num("power.start"), num("power.stop"), num("power.count"), "power.count");
    s.waists = grid(num("beam_scan.start"), num("beam_scan.stop"), num("beam_scan.count"), "beam_scan.count");

    s.coupling.jScale = num("coupling.j_scale");
    s.coupling.gradient = {num("coupling.g_re"), num("coupling.g_im")};
    s.coupling.kappaShift = num("coupling.kappa_shift");
    s.coupling.kappaBroad = num("coupling.kappa_broad");
    s.coupling.kappaSe = num("coupling.kappa_se");
    s.coupling.gainCoeff = {num("coupling.eta1"), num("coupling.eta2")};
    s.interrogationTime = num("dynamics.t_int");
    s.larmorFrequency = kTwoPi * num("dynamics.larmor");
    s.wallEta = num("wall.eta");
    s.wallReferenceDensity = num("wall.n_ref");

    s.noneon.temperature = num("noneon.temperature");
    s.noneon.bufferPressure = num("noneon.buffer");
    s.noneon.quenchPressure = num("noneon.quench");
    s.noneon.jScale = num("noneon.j_scale");
    s.noneon.attenuationFromOpticalThickness = num("noneon.alpha_from_b0") != 0.0;
    s.noneon.attenuation = num("noneon.attenuation");

    const double components = num("fit.components");
    if (components < 1.0 || components != std::floor(components)) {
        throw ConfigError("fit.components must be a positive integer", {"fit.components"});
    }
    s.fitComponents = static_cast<int>(components);
    s.seed = std::stoull(values.at("seed"));

    try {
        s.cell.validate();
        s.gas.validate();
        s.rates.validate();
        s.pump.validate();
        s.probe.validate();
    } catch (const std::exception& e) {
        throw ConfigError(fmt::format("invalid scenario: {}", e.what()));
    }
    if (s.saturationPower <= 0.0) {
        throw ConfigError("pump.p_sat must be positive", {"pump.p_sat"});
    }
    if (s.slit.width <= 0.0) {
        throw ConfigError("slit.width must be positive", {"slit.width"});
    }
    if (s.interrogationTime <= 0.0) {
        throw ConfigError("dynamics.t_int must be positive", {"dynamics.t_int"});
    }
    if (s.powers.front() < 0.0) {
        throw ConfigError("pump powers must be non-negative", {"power.start"});
    }
    return s;
}

}  // namespace

std::string environmentName(const std::string& key) {
    std::string name = "SPINDIFF_";
    for (char c : key) {
        name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return name;
}

Scenario parseScenario(std::istream& in, const std::string& source, const ScenarioOverrides& overrides) {
    std::map<std::string, Entry> entries;
    for (const ScenarioKey& key : scenarioKeys()) {
        entries[key.name] = {key.defaultValue, "default"};
    }

    std::vector<std::string> unknown;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string body = trim(std::string_view(line).substr(0, line.find('#')));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, number));
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(fmt::format("{}:{}: empty key or value", source, number));
        }
        if (findKey(key) == nullptr) {
            unknown.push_back(key);
            continue;
        }
        entries[key] = {value, fmt::format("{}:{}", source, number)};
    }
    for (const auto& [key, value] : overrides) {
        if (findKey(key) == nullptr) {
            unknown.push_back(key);
            continue;
        }
        entries[key] = {value, "override"};
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& k : unknown) {
            list += (list.empty() ? "" : ", ") + k;
        }
        throw ConfigError(fmt::format("{}: unknown keys: {}", source, list), unknown);
    }
    for (const ScenarioKey& key : scenarioKeys()) {
        const std::string env = environmentName(key.name);
        if (const char* value = std::getenv(env.c_str()); value != nullptr) {
            // Command-line overrides win over the environment.
            const bool overridden = std::any_of(overrides.begin(), overrides.end(),
                                                [&](const auto& o) { return o.first == key.name; });
            if (!overridden) {
                entries[key.name] = {trim(value), env};
            }
        }
    }

    std::map<std::string, std::string> values;
    for (const ScenarioKey& key : scenarioKeys()) {
        values[key.name] = canonicalValue(key, entries.at(key.name));
    }
    Scenario scenario = build(values);
    std::string canonical;
    for (const auto& [key, value] : values) {
        canonical += key + " = " + value + "\n";
    }
    scenario.canonical = canonical;
    scenario.hash = fnv1a(canonical);
    return scenario;
}

Scenario loadScenario(const std::filesystem::path& path, const ScenarioOverrides& overrides) {
    if (path.empty()) {
        std::istringstream empty;
        return parseScenario(empty, "<defaults>", overrides);
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open scenario file {}", path.string()));
    }
    return parseScenario(in, path.string(), overrides);
}

SweepConfig Scenario::sweepConfig(int threads) const {
    SweepConfig c;
    c.cell = cell;
    c.gas = gas;
    c.rates = rates;
    c.pump = pump;
    c.saturationPower = saturationPower;
    c.attenuationFromOpticalThickness = attenuationFromOpticalThickness;
    c.temperature = temperature;
    c.powers = powers;
    c.coupling = coupling;
    c.interrogationTime = interrogationTime;
    c.larmorFrequency = larmorFrequency;
    c.threads = threads;
    return c;
}

SweepConfig Scenario::noneonSweepConfig(int threads) const {
    SweepConfig c = sweepConfig(threads);
    c.cell.geometry = Geometry::box;
    c.temperature = noneon.temperature;
    c.gas.bufferPressure = noneon.bufferPressure;
    c.gas.quenchPressure = noneon.quenchPressure;
    c.coupling.jScale = noneon.jScale;
    c.attenuationFromOpticalThickness = noneon.attenuationFromOpticalThickness;
    c.pump.attenuation = noneon.attenuation;
    return c;
}

}  // namespace spindiff
