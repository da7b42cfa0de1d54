#include "spindiff/gas_model.hpp"

#include <cmath>

#include "spindiff/errors.hpp"

namespace spindiff {

void GasSpec::validate() const {
    if (bufferPressure < 0.0 || quenchPressure < 0.0) {
        throw DomainError("gas pressures must be non-negative");
    }
    if (!(diffusionRef > 0.0)) {
        throw DomainError("reference diffusion coefficient must be positive");
    }
    if (!(crossSection > 0.0)) {
        throw DomainError("scattering cross-section must be positive");
    }
}

void RateTable::validate() const {
    for (double r : {sdNeon, sdNitrogen, sdAlkali, seNeon, seAlkali, pumping, gradient}) {
        if (r < 0.0) {
            throw DomainError("relaxation rates must be non-negative");
        }
    }
    if (!(slowingDown > 0.0) || !(seBroadening > 0.0)) {
        throw DomainError("slowing-down factor and q_SE must be positive");
    }
}

double vaporDensity(double temperature, const GasSpec& gas) {
    if (!(temperature > 0.0)) {
        throw DomainError("temperature must be positive");
    }
    const double pressureTorr = std::pow(10.0, gas.vaporPressureA - gas.vaporPressureB / temperature);
    return pressureTorr * kPascalPerTorr / (kBoltzmann * temperature);
}

double diffusionCoefficient(double temperature, const GasSpec& gas) {
    if (!(gas.bufferPressure > 0.0)) {
        throw DomainError("diffusion coefficient needs a positive buffer pressure");
    }
    if (!(temperature > 0.0)) {
        throw DomainError("temperature must be positive");
    }
    return gas.diffusionRef * (kReferencePressureTorr / gas.bufferPressure) *
           std::pow(temperature / kReferenceTemperature, 1.5);
}

double totalDecoherenceRate(const RateTable& r) {
    r.validate();
    return (r.sdNeon + r.sdNitrogen + r.sdAlkali + r.seNeon + r.pumping) / r.slowingDown +
           r.seAlkali / r.seBroadening + r.gradient;
}

double opticalThickness(double density, const GasSpec& gas, double radius) {
    return 2.0 * density * gas.crossSection * radius;
}

double pumpPolarization(double power, double saturationPower) {
    if (power < 0.0 || !(saturationPower > 0.0)) {
        throw DomainError("pump power must be >= 0 and saturation power > 0");
    }
    return power / (power + saturationPower);
}

double nobleGasMagnetizationProxy(const GasSpec& gas, double density, double polarization) {
    if (polarization < 0.0 || polarization > 1.0) {
        throw DomainError("polarization outside [0, 1]");
    }
    return gas.spinExchangeCoeff * density * polarization;
}

double effectiveRadius(double temperature, const CellSpec& cell, const GasSpec& gas, double eta,
                       double referenceDensity) {
    if (eta < 0.0) {
        throw DomainError("dirty-wall coefficient must be non-negative");
    }
    return cell.radius / (1.0 + eta * vaporDensity(temperature, gas) / referenceDensity);
}

}  // namespace spindiff
