#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "spindiff/coupled_dynamics.hpp"
#include "spindiff/eigenmodes.hpp"
#include "spindiff/gas_model.hpp"
#include "spindiff/optics.hpp"

namespace spindiff {

/// Pump-dependent coupling model. Unset entries are NaN and rejected by
/// pumpSweep() with the list of missing configuration keys.
struct CouplingConstants {
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

    double jScale = kUnset;                        // |J| = jScale N_A p_A, m^3/s
    std::complex<double> gradient{1.0, 0.0};       // fixes the phase of J
    double kappaShift = kUnset;                    // light shift, rad/s per W/m^2
    double kappaBroad = kUnset;                    // broadening, 1/s per W/m^2
    double kappaSe = kUnset;                       // spin-exchange shift, rad/s per unit M
    std::array<double, 2> gainCoeff{kUnset, kUnset};  // eta_1, eta_2, 1/s
};

struct SweepConfig {
    CellSpec cell;
    GasSpec gas;
    RateTable rates;
    BeamSpec pump;                 // power is overwritten per grid point
    double saturationPower = 1e-3;  // W
    bool attenuationFromOpticalThickness = true;
    double temperature = 333.15;   // K
    std::vector<double> powers;    // W, ascending
    CouplingConstants coupling;
    double interrogationTime = 1.0;  // s
    double larmorFrequency = 0.0;    // rad/s, added to the reported frequencies
    BeamQuadrature quadrature;
    int threads = 1;
};

/// The two coupled modes: the fundamental and its lowest z-odd partner
/// (s000 and the z-oriented l = 1 mode, or b111 and b112 in a box).
struct ModePair {
    Mode first;
    Mode second;
    double zOverlap = 0.0;  // int s2 z s1 dV
};

ModePair couplingModes(const CellSpec& cell, const ModeRates& rates);

struct SweepPoint {
    double power = 0.0;  // W
    double n1 = 0.0;
    double n2 = 0.0;
    double f1 = 0.0;  // Hz
    double f2 = 0.0;
    double gamma1 = 0.0;  // Hz
    double gamma2 = 0.0;
    double phi1 = 0.0;  // rad
    double phi2 = 0.0;
    double jOverDelta = 0.0;
    bool coupled = false;

    // Model internals kept for the figure outputs.
    double polarization = 0.0;
    Complex coupling;
    CoupledSystem system;
};

/// Evaluates the driven two-mode model at every power of the grid.
/// Dynamics run in the frame rotating at the mean of the two mode frequencies,
/// starting from zero amplitude, for the interrogation time.
std::vector<SweepPoint> pumpSweep(const SweepConfig& config);

/// Sweep CSV: P_mW, N1, N2, f1_Hz, f2_Hz, G1_Hz, G2_Hz, phi1_rad, phi2_rad,
/// J_over_Delta_abs, regime_label.
void writeSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points);

/// Run f(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to pre-sized storage indexed by i.
void parallelFor(std::size_t count, int threads, const std::function<void(std::size_t)>& f);

}  // namespace spindiff
