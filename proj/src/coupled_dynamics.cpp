#include "spindiff/coupled_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "spindiff/errors.hpp"
#include "spindiff/quadrature.hpp"

namespace spindiff {
namespace {

constexpr Complex kI{0.0, 1.0};

// e^{a} cosh(sqrt(z)) and e^{a} sinh(sqrt(z))/sqrt(z). The series in z is
// entire and used near the exceptional point; elsewhere the exponentials are
// combined before evaluation so that e^{a} cannot underflow against an
// overflowing cosh.
std::pair<Complex, Complex> scaledHyperbolicPair(Complex a, Complex z) {
    if (std::abs(z) < 1.0) {
        Complex c{1.0, 0.0};
        Complex s{1.0, 0.0};
        Complex termC{1.0, 0.0};
        Complex termS{1.0, 0.0};
        for (int k = 1; k < 40; ++k) {
            termC *= z / ((2.0 * k - 1.0) * (2.0 * k));
            termS *= z / ((2.0 * k) * (2.0 * k + 1.0));
            c += termC;
            s += termS;
            if (std::abs(termC) < 1e-18 && std::abs(termS) < 1e-18) {
                break;
            }
        }
        const Complex phase = std::exp(a);
        return {phase * c, phase * s};
    }
    const Complex w = std::sqrt(z);
    const Complex up = std::exp(a + w);
    const Complex down = std::exp(a - w);
    return {0.5 * (up + down), 0.5 * (up - down) / w};
}

using State = std::array<double, 4>;

}  // namespace

CoupledSystem buildSystem(double omega1, double omega2, double gamma1, double gamma2, Complex coupling,
                          std::array<Complex, 2> gain) {
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) {
        throw DomainError("mode decay rates must be positive");
    }
    CoupledSystem s;
    s.e0 = 0.5 * (kI * omega1 - gamma1 + kI * omega2 - gamma2);
    s.delta = 0.5 * (kI * omega1 - gamma1 - kI * omega2 + gamma2);
    s.coupling = coupling;
    s.gain = gain;
    return s;
}

EigenPair eigenvalues(const CoupledSystem& system) {
    const Complex mu = std::sqrt(system.delta * system.delta + system.coupling * system.coupling);
    EigenPair out;
    out.values = {system.e0 + mu, system.e0 - mu};
    auto before = [](Complex a, Complex b) {
        if (a.real() != b.real()) {
            return a.real() > b.real();
        }
        return a.imag() > b.imag();
    };
    if (before(out.values[1], out.values[0])) {
        std::swap(out.values[0], out.values[1]);
    }
    out.exceptional = std::abs(mu) < 1e-12 * std::abs(system.e0);
    return out;
}

ModeAmplitudes evolve(const CoupledSystem& system, const ModeAmplitudes& start, double t) {
    if (t < 0.0) {
        throw DomainError("evolution time must be non-negative");
    }
    if (t == 0.0) {
        return start;
    }
    if (system.hasGain()) {
        return evolveNumerically(system, start, t);
    }
    const Complex mu2 = system.delta * system.delta + system.coupling * system.coupling;
    const auto [ch, shOverMu] = scaledHyperbolicPair(system.e0 * t, mu2 * t * t);
    const Complex sh = shOverMu * t;  // e^{E0 t} sinh(mu t) / mu
    ModeAmplitudes out;
    out.c1 = ch * start.c1 + sh * (system.delta * start.c1 + system.coupling * start.c2);
    out.c2 = ch * start.c2 + sh * (system.coupling * start.c1 - system.delta * start.c2);
    out.time = start.time + t;
    return out;
}

ModeAmplitudes evolveNumerically(const CoupledSystem& system, const ModeAmplitudes& start, double t, double rtol) {
    namespace odeint = boost::numeric::odeint;
    if (t < 0.0) {
        throw DomainError("evolution time must be non-negative");
    }
    if (t == 0.0) {
        return start;
    }
    const Complex a11 = system.rate1();
    const Complex a22 = system.rate2();
    const Complex j = system.coupling;
    const auto rhs = [&](const State& s, State& ds, double /*time*/) {
        const Complex c1{s[0], s[1]};
        const Complex c2{s[2], s[3]};
        const Complex d1 = a11 * c1 + j * c2 + system.gain[0];
        const Complex d2 = j * c1 + a22 * c2 + system.gain[1];
        ds = {d1.real(), d1.imag(), d2.real(), d2.imag()};
    };
    State state{start.c1.real(), start.c1.imag(), start.c2.real(), start.c2.imag()};
    const double rate = std::max({std::abs(a11), std::abs(a22), std::abs(j), 1e-300});
    const double scale = std::max({std::abs(start.c1), std::abs(start.c2),
                                   std::abs(system.gain[0]) / rate, std::abs(system.gain[1]) / rate, 1e-300});
    using Stepper = odeint::runge_kutta_dopri5<State>;
    // Absolute floor far below any decayed state keeps the tolerance relative.
    auto stepper = odeint::make_controlled<Stepper>(std::max(1e-30 * scale, 1e-300), rtol);
    try {
        odeint::integrate_adaptive(stepper, rhs, state, 0.0, t, std::min(t, 0.01 / rate));
    } catch (const odeint::step_adjustment_error& e) {
        throw IntegrationError(std::string("adaptive integration failed: ") + e.what());
    } catch (const odeint::no_progress_error& e) {
        throw IntegrationError(std::string("adaptive integration failed: ") + e.what());
    }
    for (double v : state) {
        if (!std::isfinite(v)) {
            throw IntegrationError("adaptive integration produced a non-finite state");
        }
    }
    return {{state[0], state[1]}, {state[2], state[3]}, start.time + t};
}

double excitationNumber(const LorentzianComponent& component) {
    if (!(component.linewidth > 0.0)) {
        throw DomainError("linewidth must be positive");
    }
    return std::numbers::pi * std::abs(component.amplitude) * component.linewidth;
}

double excitationNumberNumeric(const LorentzianComponent& component, double halfWindow, int panels) {
    if (!(component.linewidth > 0.0)) {
        throw DomainError("linewidth must be positive");
    }
    const double amp = std::abs(component.amplitude);
    if (amp == 0.0) {
        return 0.0;
    }
    // Panels graded towards the centre, where the envelope varies fastest.
    const QuadratureRule base = gaussLegendre(16);
    double total = 0.0;
    const double g = component.linewidth;
    for (int side : {-1, 1}) {
        for (int p = 0; p < panels; ++p) {
            const double u0 = static_cast<double>(p) / panels;
            const double u1 = static_cast<double>(p + 1) / panels;
            // x = g * sinh-like stretch: x(u) = g * (exp(u L) - 1), L = log(1 + W)
            const double stretch = std::log1p(halfWindow);
            total += integratePiecewise(base, u0, u1, {}, [&](double u) {
                const double x = g * std::expm1(u * stretch);
                const double dx = g * stretch * std::exp(u * stretch);
                const std::complex<double> v = component.response(component.center + side * x);
                return std::norm(v) / amp * dx;
            });
        }
    }
    return total;
}

}  // namespace spindiff
