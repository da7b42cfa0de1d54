#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "spindiff/signal_fit.hpp"

namespace spindiff {

using Complex = std::complex<double>;

/// Two-mode model  dc/dt = (E0 + Delta [[1, J/Delta], [J/Delta, -1]]) c + g.
struct CoupledSystem {
    Complex e0;
    Complex delta;
    Complex coupling;
    std::array<Complex, 2> gain{};

    /// Diagonal entries i omega_m - Gamma_m.
    [[nodiscard]] Complex rate1() const { return e0 + delta; }
    [[nodiscard]] Complex rate2() const { return e0 - delta; }
    [[nodiscard]] bool hasGain() const { return gain[0] != Complex{} || gain[1] != Complex{}; }
};

/// E0 = (i w1 - G1 + i w2 - G2)/2, Delta = (i w1 - G1 - i w2 + G2)/2.
CoupledSystem buildSystem(double omega1, double omega2, double gamma1, double gamma2, Complex coupling,
                          std::array<Complex, 2> gain = {});

struct EigenPair {
    std::array<Complex, 2> values;  // descending real part, then imaginary part
    bool exceptional = false;       // |sqrt(Delta^2 + J^2)| < 1e-12 |E0|
};

EigenPair eigenvalues(const CoupledSystem& system);

struct ModeAmplitudes {
    Complex c1;
    Complex c2;
    double time = 0.0;
};

/// Propagate by t. Gain-free systems use the closed-form exponential
///   e^{E0 t} [cosh(mu t) I + sinh(mu t)/mu M],  mu^2 = Delta^2 + J^2;
/// with gain the affine system is integrated adaptively.
ModeAmplitudes evolve(const CoupledSystem& system, const ModeAmplitudes& start, double t);

/// Adaptive Dormand-Prince integration, relative tolerance `rtol`.
/// Throws IntegrationError when the step size underflows.
ModeAmplitudes evolveNumerically(const CoupledSystem& system, const ModeAmplitudes& start, double t,
                                 double rtol = 1e-10);

/// N = pi |A| Gamma: area of the magnitude-squared envelope |L(f)|^2 / |A|.
double excitationNumber(const LorentzianComponent& component);

/// Same quantity by Gauss-Legendre integration over f0 +/- halfWindow linewidths.
double excitationNumberNumeric(const LorentzianComponent& component, double halfWindow, int panels = 200);

}  // namespace spindiff
