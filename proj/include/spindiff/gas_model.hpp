#pragma once

#include "spindiff/eigenmodes.hpp"

namespace spindiff {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kPascalPerTorr = 133.322368;
inline constexpr double kReferencePressureTorr = 760.0;
inline constexpr double kReferenceTemperature = 273.15;  // K

/// Buffer-gas and alkali vapour properties.
///
/// The vapour-pressure law is log10(P / torr) = A - B / T. The defaults are
/// the liquid-phase caesium constants expressed in torr.
struct GasSpec {
    double bufferPressure = 500.0;  // torr
    double quenchPressure = 20.0;   // torr
    double vaporPressureA = 7.046;
    double vaporPressureB = 3830.0;       // K
    double diffusionRef = 2.0e-5;         // m^2/s at 760 torr, 273.15 K
    double crossSection = 1.0e-16;        // m^2
    double spinExchangeCoeff = 1.0;       // normalised units
    double gyromagneticRatio = 2.2e10;    // rad/s/T

    void validate() const;
};

/// Relaxation rates (1/s) entering the homogeneous decoherence rate.
struct RateTable {
    double sdNeon = 0.0;
    double sdNitrogen = 0.0;
    double sdAlkali = 0.0;
    double seNeon = 0.0;
    double seAlkali = 0.0;
    double pumping = 0.0;
    double gradient = 0.0;
    double slowingDown = 1.0;   // epsilon
    double seBroadening = 1.0;  // q_SE

    void validate() const;
};

/// Alkali number density (1/m^3) from the vapour-pressure law.
double vaporDensity(double temperature, const GasSpec& gas);

/// D scaled from the reference point as (760 torr / P) (T / 273.15 K)^{3/2}.
double diffusionCoefficient(double temperature, const GasSpec& gas);

/// (1/eps)(R_SD sum + R_SE,Ne + R_P) + R_SE,alkali / q_SE + R_grad.
double totalDecoherenceRate(const RateTable& rates);

/// b0 = 2 N_A sigma R.
double opticalThickness(double density, const GasSpec& gas, double radius);

/// P / (P + P_sat).
double pumpPolarization(double power, double saturationPower);

/// M = k_SE N_A p_A.
double nobleGasMagnetizationProxy(const GasSpec& gas, double density, double polarization);

/// Reference density for the dirty-wall model, 1/m^3.
inline constexpr double kDirtyWallReferenceDensity = 1.0e18;

/// R / (1 + eta N_A(T) / N_ref), with N_ref = kDirtyWallReferenceDensity unless given.
double effectiveRadius(double temperature, const CellSpec& cell, const GasSpec& gas, double eta,
                       double referenceDensity = kDirtyWallReferenceDensity);

}  // namespace spindiff
