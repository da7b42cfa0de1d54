#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace spindiff {

/// Gauss-Legendre nodes and weights on an interval.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gaussLegendre(int order);

/// n-point Gauss-Legendre rule mapped onto [a, b].
QuadratureRule gaussLegendre(int order, double a, double b);

/// Composite rule: `order` points on every sub-interval of [a, b] delimited by
/// the breakpoints that fall strictly inside it.
QuadratureRule compositeGaussLegendre(int order, double a, double b, std::span<const double> breakpoints);

template <class F>
auto integrate(const QuadratureRule& rule, F&& f) {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t i = 0; i < rule.size(); ++i) {
        sum += rule.weights[i] * f(rule.nodes[i]);
    }
    return sum;
}

/// Integrate f over [a, b] with a [-1, 1] base rule applied on each
/// sub-interval cut by the breakpoints inside (a, b). Breakpoints must be sorted.
template <class F>
double integratePiecewise(const QuadratureRule& base, double a, double b, std::span<const double> breakpoints,
                          F&& f) {
    double sum = 0.0;
    double lo = a;
    auto segment = [&](double l, double h) {
        if (h <= l) {
            return;
        }
        const double mid = 0.5 * (l + h);
        const double half = 0.5 * (h - l);
        double part = 0.0;
        for (std::size_t i = 0; i < base.size(); ++i) {
            part += base.weights[i] * f(mid + half * base.nodes[i]);
        }
        sum += half * part;
    };
    for (double p : breakpoints) {
        if (p > lo && p < b) {
            segment(lo, p);
            lo = p;
        }
    }
    segment(lo, b);
    return sum;
}

}  // namespace spindiff
