#include "spindiff/signal_fit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "spindiff/errors.hpp"

namespace spindiff {
namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

double wrapPhase(double phi) {
    const double twoPi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, twoPi);
    if (phi <= -std::numbers::pi) {
        phi += twoPi;
    } else if (phi > std::numbers::pi) {
        phi -= twoPi;
    }
    return phi;
}

// Parameter layout: [bg_re, bg_im, (a_re, a_im, gamma, f0) per component].
struct Model {
    std::span<const double> f;
    std::span<const double> x;
    std::span<const double> y;
    int count = 0;

    [[nodiscard]] int parameters() const { return 2 + 4 * count; }
    [[nodiscard]] int residuals() const { return 2 * static_cast<int>(f.size()); }

    void residual(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        const std::size_t n = f.size();
        r.resize(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            cd z{p[0], p[1]};
            for (int c = 0; c < count; ++c) {
                const cd a{p[2 + 4 * c], p[3 + 4 * c]};
                const double g = p[4 + 4 * c];
                z += a * g / (g + kI * (f[i] - p[5 + 4 * c]));
            }
            r[2 * i] = z.real() - x[i];
            r[2 * i + 1] = z.imag() - y[i];
        }
    }

    void jacobian(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
        const std::size_t n = f.size();
        jac.setZero(2 * n, parameters());
        for (std::size_t i = 0; i < n; ++i) {
            jac(2 * i, 0) = 1.0;
            jac(2 * i + 1, 1) = 1.0;
            for (int c = 0; c < count; ++c) {
                const cd a{p[2 + 4 * c], p[3 + 4 * c]};
                const double g = p[4 + 4 * c];
                const double delta = f[i] - p[5 + 4 * c];
                const cd den = g + kI * delta;
                const cd lor = g / den;
                const cd den2 = den * den;
                const cd dGamma = a * kI * delta / den2;
                const cd dCenter = a * kI * g / den2;
                const cd dIm = kI * lor;
                const int o = 2 + 4 * c;
                jac(2 * i, o) = lor.real();
                jac(2 * i + 1, o) = lor.imag();
                jac(2 * i, o + 1) = dIm.real();
                jac(2 * i + 1, o + 1) = dIm.imag();
                jac(2 * i, o + 2) = dGamma.real();
                jac(2 * i + 1, o + 2) = dGamma.imag();
                jac(2 * i, o + 3) = dCenter.real();
                jac(2 * i + 1, o + 3) = dCenter.imag();
            }
        }
    }
};

struct LmOutcome {
    Eigen::VectorXd params;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

LmOutcome levenbergMarquardt(const Model& model, Eigen::VectorXd p, const FitOptions& options, double costFloor) {
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    model.residual(p, r);
    double cost = 0.5 * r.squaredNorm();
    double lambda = 1e-3;
    LmOutcome out;
    out.trace.push_back(cost);

    for (int iter = 1; iter <= options.maxIterations; ++iter) {
        out.iterations = iter;
        if (cost <= costFloor) {
            out.converged = true;
            break;
        }
        model.jacobian(p, jac);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        Eigen::VectorXd diag = jtj.diagonal();
        for (Eigen::Index i = 0; i < diag.size(); ++i) {
            diag[i] = std::max(diag[i], 1e-300);
        }

        bool accepted = false;
        double newCost = cost;
        Eigen::VectorXd trial;
        Eigen::VectorXd rTrial;
        while (lambda < 1e20) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * diag;
            const Eigen::VectorXd step = a.ldlt().solve(-grad);
            trial = p + step;
            bool valid = step.allFinite();
            for (int c = 0; valid && c < model.count; ++c) {
                valid = trial[4 + 4 * c] > 0.0;
            }
            if (valid) {
                model.residual(trial, rTrial);
                newCost = 0.5 * rTrial.squaredNorm();
                if (std::isfinite(newCost) && newCost < cost) {
                    accepted = true;
                    break;
                }
            }
            lambda *= 4.0;
        }
        if (!accepted) {
            // No descent direction left at working precision: stationary point.
            out.converged = true;
            break;
        }
        const double change = (cost - newCost) / cost;
        p = trial;
        r = rTrial;
        cost = newCost;
        lambda = std::max(lambda / 5.0, 1e-12);
        out.trace.push_back(cost);
        if (change < options.relativeTolerance) {
            out.converged = true;
            break;
        }
    }
    out.params = p;
    out.cost = cost;
    return out;
}

struct PeakEstimate {
    cd background;
    double center = 0.0;
    cd amplitude;
    double halfWidth = 0.0;
};

cd edgeBackground(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const std::size_t edge = std::max<std::size_t>(1, n / 20);
    cd sum{};
    for (std::size_t i = 0; i < edge; ++i) {
        sum += cd{x[i], y[i]} + cd{x[n - 1 - i], y[n - 1 - i]};
    }
    return sum / (2.0 * static_cast<double>(edge));
}

PeakEstimate pickPeak(std::span<const double> f, std::span<const double> x, std::span<const double> y, cd background) {
    const std::size_t n = f.size();
    std::size_t best = 0;
    double bestMag = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::abs(cd{x[i], y[i]} - background);
        if (mag > bestMag) {
            bestMag = mag;
            best = i;
        }
    }
    const double level = bestMag / std::numbers::sqrt2;
    std::size_t lo = best;
    while (lo > 0 && std::abs(cd{x[lo], y[lo]} - background) > level) {
        --lo;
    }
    std::size_t hi = best;
    while (hi + 1 < n && std::abs(cd{x[hi], y[hi]} - background) > level) {
        ++hi;
    }
    PeakEstimate pk;
    pk.background = background;
    pk.center = f[best];
    pk.amplitude = cd{x[best], y[best]} - background;
    pk.halfWidth = 0.5 * (f[hi] - f[lo]);
    const double spacing = (f.back() - f.front()) / static_cast<double>(std::max<std::size_t>(1, n - 1));
    if (pk.halfWidth <= 0.0) {
        pk.halfWidth = spacing;
    }
    return pk;
}

Eigen::VectorXd nestedStart(const PeakEstimate& pk, int count, double widthFactor) {
    Eigen::VectorXd p(2 + 4 * count);
    p[0] = pk.background.real();
    p[1] = pk.background.imag();
    double share = 1.0;
    double width = pk.halfWidth;
    for (int c = 0; c < count; ++c) {
        const double frac = c + 1 < count ? 0.6 * share : share;
        share -= frac;
        const cd a = frac * pk.amplitude;
        p[2 + 4 * c] = a.real();
        p[3 + 4 * c] = a.imag();
        p[4 + 4 * c] = width;
        p[5 + 4 * c] = pk.center;
        width *= widthFactor;
    }
    return p;
}

FitResult toResult(const Model& model, const LmOutcome& lm) {
    FitResult res;
    const Eigen::VectorXd& p = lm.params;
    res.background = {p[0], p[1]};
    for (int c = 0; c < model.count; ++c) {
        const cd a{p[2 + 4 * c], p[3 + 4 * c]};
        LorentzianComponent comp;
        comp.amplitude = std::abs(a);
        comp.phase = wrapPhase(std::arg(a));
        comp.linewidth = p[4 + 4 * c];
        comp.center = p[5 + 4 * c];
        res.components.push_back(comp);
    }
    std::sort(res.components.begin(), res.components.end(), [](const auto& a, const auto& b) {
        if (a.linewidth != b.linewidth) {
            return a.linewidth < b.linewidth;
        }
        return a.center < b.center;
    });
    res.cost = lm.cost;
    res.residualRms = std::sqrt(2.0 * lm.cost / static_cast<double>(model.residuals()));
    res.iterations = lm.iterations;
    res.costTrace = lm.trace;
    return res;
}

}  // namespace

cd LorentzianComponent::response(double frequency) const {
    return amplitude * std::exp(kI * phase) * linewidth / (linewidth + kI * (frequency - center));
}

void Spectrum::validate() const {
    if (frequency.size() < 2 || x.size() != frequency.size() || y.size() != frequency.size()) {
        throw DomainError("spectrum needs at least two points and matching X/Y lengths");
    }
    for (std::size_t i = 1; i < frequency.size(); ++i) {
        if (!(frequency[i] > frequency[i - 1])) {
            throw DomainError("spectrum frequency grid must be strictly increasing");
        }
    }
}

Spectrum synthesizeSpectrum(std::span<const LorentzianComponent> components, cd background,
                            std::span<const double> grid, double noise, std::uint64_t seed) {
    Spectrum s;
    s.frequency.assign(grid.begin(), grid.end());
    s.noise = noise;
    s.x.resize(grid.size());
    s.y.resize(grid.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        cd z = background;
        for (const LorentzianComponent& c : components) {
            z += c.response(grid[i]);
        }
        if (noise > 0.0) {
            const double nx = normal(rng);
            const double ny = normal(rng);
            z += cd{noise * nx, noise * ny};
        }
        s.x[i] = z.real();
        s.y[i] = z.imag();
    }
    s.validate();
    return s;
}

FitResult fitLorentzians(const Spectrum& spectrum, int count, const FitOptions& options) {
    spectrum.validate();
    if (count < 1) {
        throw DomainError("number of Lorentzian components must be at least 1");
    }
    const std::span<const double> f(spectrum.frequency);
    const std::span<const double> x(spectrum.x);
    const std::span<const double> y(spectrum.y);

    double scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        scale = std::max(scale, std::abs(cd{x[i], y[i]}));
    }
    const double costFloor = 1e-28 * scale * scale * static_cast<double>(f.size());

    const cd bg = edgeBackground(x, y);
    const PeakEstimate peak = pickPeak(f, x, y, bg);

    std::vector<Eigen::VectorXd> starts;
    starts.push_back(nestedStart(peak, count, 0.5));
    if (count > 1) {
        starts.push_back(nestedStart(peak, count, 2.0));
        // Greedy: one-component fit, then seed the next component on the
        // largest residual.
        Model one{f, x, y, 1};
        LmOutcome base = levenbergMarquardt(one, nestedStart(peak, 1, 1.0), options, costFloor);
        Eigen::VectorXd greedy = base.params;
        for (int c = 1; c < count; ++c) {
            Model partial{f, x, y, c};
            Eigen::VectorXd r;
            partial.residual(greedy, r);
            std::vector<double> rx(f.size());
            std::vector<double> ry(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) {
                rx[i] = -r[2 * i];
                ry[i] = -r[2 * i + 1];
            }
            const PeakEstimate extra = pickPeak(f, rx, ry, cd{});
            Eigen::VectorXd next(2 + 4 * (c + 1));
            next.head(greedy.size()) = greedy;
            next[2 + 4 * c] = extra.amplitude.real();
            next[3 + 4 * c] = extra.amplitude.imag();
            next[4 + 4 * c] = extra.halfWidth;
            next[5 + 4 * c] = extra.center;
            Model grown{f, x, y, c + 1};
            greedy = levenbergMarquardt(grown, next, options, costFloor).params;
        }
        starts.push_back(greedy);
    }

    const Model model{f, x, y, count};
    bool haveConverged = false;
    LmOutcome best;
    LmOutcome lastFailure;
    for (const Eigen::VectorXd& start : starts) {
        LmOutcome lm = levenbergMarquardt(model, start, options, costFloor);
        if (!lm.converged) {
            lastFailure = lm;
            continue;
        }
        if (!haveConverged || lm.cost < best.cost) {
            best = std::move(lm);
            haveConverged = true;
        }
    }
    if (!haveConverged) {
        throw FitError(fmt::format("Lorentzian fit did not converge in {} iterations", options.maxIterations),
                       toResult(model, lastFailure));
    }
    FitResult result = toResult(model, best);
    result.capacityWarning = model.parameters() > model.residuals() ||
                             static_cast<std::size_t>(count) * 4 > spectrum.frequency.size();
    return result;
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw DomainError("spearman needs two sequences of equal length >= 3");
    }
    auto ranks = [](std::span<const double> v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) {
                ++j;
            }
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) {
                r[order[k]] = avg;
            }
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return {std::nan(""), false};
    }
    return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), true};
}

LinearFit asymptoticLinearFit(std::span<const double> powers, std::span<const double> values, double tailFraction) {
    if (powers.size() != values.size() || powers.empty()) {
        throw DomainError("asymptotic fit needs matching, non-empty sequences");
    }
    if (!(tailFraction > 0.0 && tailFraction <= 1.0)) {
        throw DomainError("tail fraction must lie in (0, 1]");
    }
    const auto [minIt, maxIt] = std::minmax_element(powers.begin(), powers.end());
    const double threshold = *maxIt - tailFraction * (*maxIt - *minIt);
    double sx = 0.0;
    double sy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] >= threshold) {
            sx += powers[i];
            sy += values[i];
            ++n;
        }
    }
    if (n < 3) {
        throw DomainError(fmt::format("asymptotic fit needs >= 3 tail points, got {}", n));
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] >= threshold) {
            sxx += (powers[i] - mx) * (powers[i] - mx);
            sxy += (powers[i] - mx) * (values[i] - my);
        }
    }
    if (sxx == 0.0) {
        throw DomainError("asymptotic fit tail has no power spread");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = n;
    return fit;
}

Spectrum readSpectrumCsv(std::istream& in) {
    Spectrum s;
    std::string line;
    int lineNo = 0;
    bool headerSeen = false;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double f = 0.0;
        double x = 0.0;
        double y = 0.0;
        if (!(row >> f >> x >> y)) {
            if (!headerSeen) {
                headerSeen = true;
                continue;
            }
            throw ConfigError(fmt::format("spectrum CSV line {}: expected three numbers", lineNo));
        }
        headerSeen = true;
        s.frequency.push_back(f);
        s.x.push_back(x);
        s.y.push_back(y);
    }
    s.validate();
    return s;
}

void writeSpectrumCsv(std::ostream& out, const Spectrum& s) {
    out << "f_Hz,X,Y\n";
    for (std::size_t i = 0; i < s.frequency.size(); ++i) {
        out << fmt::format("{:.17g},{:.17g},{:.17g}\n", s.frequency[i], s.x[i], s.y[i]);
    }
}

void writeFitCsv(std::ostream& out, const FitResult& fit) {
    out << "# gamma_Hz is the half width at half maximum (FWHM = 2 gamma)\n";
    out << "component_id,A,gamma_Hz,f0_Hz,phi_rad,bg_re,bg_im,residual_rms\n";
    for (std::size_t i = 0; i < fit.components.size(); ++i) {
        const LorentzianComponent& c = fit.components[i];
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", i + 1, c.amplitude,
                           c.linewidth, c.center, c.phase, fit.background.real(), fit.background.imag(),
                           fit.residualRms);
    }
}

}  // namespace spindiff
