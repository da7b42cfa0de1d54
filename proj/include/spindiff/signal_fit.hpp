#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spindiff {

/// One complex Lorentzian resonance  A e^{i phi} Gamma / (Gamma + i (f - f0)).
/// Gamma is the half width at half maximum, in Hz.
struct LorentzianComponent {
    double amplitude = 0.0;
    double linewidth = 1.0;
    double center = 0.0;
    double phase = 0.0;

    [[nodiscard]] std::complex<double> response(double frequency) const;
};

/// Lock-in X/Y record on a strictly increasing frequency grid.
struct Spectrum {
    std::vector<double> frequency;
    std::vector<double> x;
    std::vector<double> y;
    double noise = 0.0;

    void validate() const;
};

/// Sum of components plus a complex background, with seeded Gaussian noise of
/// standard deviation `noise` on each quadrature.
Spectrum synthesizeSpectrum(std::span<const LorentzianComponent> components, std::complex<double> background,
                            std::span<const double> grid, double noise, std::uint64_t seed);

struct FitResult {
    std::vector<LorentzianComponent> components;  // ascending linewidth, then centre
    std::complex<double> background;
    double residualRms = 0.0;  // over both quadratures
    double cost = 0.0;         // half the sum of squared residuals
    int iterations = 0;
    std::vector<double> costTrace;
    bool capacityWarning = false;
};

/// Damped least-squares failure; carries the last iterate.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, FitResult last) : std::runtime_error(what), last_(std::move(last)) {}
    [[nodiscard]] const FitResult& lastIterate() const noexcept { return last_; }

private:
    FitResult last_;
};

struct FitOptions {
    int maxIterations = 500;
    double relativeTolerance = 1e-10;
};

/// Fit `count` Lorentzians and a constant background to X and Y jointly.
FitResult fitLorentzians(const Spectrum& spectrum, int count, const FitOptions& options = {});

struct SpearmanResult {
    double rho = 0.0;
    bool defined = false;  // false when either input is constant
};

/// Pearson correlation of average (fractional) ranks.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares restricted to powers >= max - tailFraction * (max - min).
LinearFit asymptoticLinearFit(std::span<const double> powers, std::span<const double> values, double tailFraction);

/// Spectrum CSV (f_Hz, X, Y); lines starting with '#' are skipped.
Spectrum readSpectrumCsv(std::istream& in);
void writeSpectrumCsv(std::ostream& out, const Spectrum& spectrum);

/// Fit CSV: component_id, A, gamma_Hz, f0_Hz, phi_rad, bg_re, bg_im, residual_rms.
void writeFitCsv(std::ostream& out, const FitResult& fit);

}  // namespace spindiff
