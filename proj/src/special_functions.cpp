#include "spindiff/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spindiff/errors.hpp"

namespace spindiff {
namespace {

constexpr double kSeriesThreshold = 1.0;

void checkArguments(int l, double x) {
    if (l < 0 || l > kMaxAngularOrder) {
        throw DomainError("spherical Bessel order " + std::to_string(l) + " outside [0, 3]");
    }
    if (!(x >= 0.0)) {
        throw DomainError("spherical Bessel argument must be non-negative");
    }
}

// (2l+1)!!
double doubleFactorial(int l) {
    double v = 1.0;
    for (int k = 3; k <= 2 * l + 1; k += 2) {
        v *= k;
    }
    return v;
}

// j_l(x) = x^l sum_k (-x^2/2)^k / (k! (2l+2k+1)!!)
double besselSeries(int l, double x) {
    const double h = -0.5 * x * x;
    double term = std::pow(x, l) / doubleFactorial(l);
    double sum = term;
    for (int k = 1; k < 30; ++k) {
        term *= h / (k * (2.0 * l + 2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

// Term-wise derivative of the series above.
double besselSeriesPrime(int l, double x) {
    double coeff = 1.0 / doubleFactorial(l);  // c_k without the power of x
    double sum = l > 0 ? l * coeff * std::pow(x, l - 1) : 0.0;
    for (int k = 1; k < 30; ++k) {
        coeff *= -0.5 / (k * (2.0 * l + 2.0 * k + 1.0));
        const int p = l + 2 * k;
        const double term = coeff * p * std::pow(x, p - 1);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && k > 1) {
            break;
        }
    }
    return sum;
}

double besselClosed(int l, double x) {
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double ix = 1.0 / x;
    switch (l) {
        case 0:
            return s * ix;
        case 1:
            return (s * ix - c) * ix;
        case 2:
            return ((3.0 * ix * ix - 1.0) * s - 3.0 * c * ix) * ix;
        default:
            return ((15.0 * ix * ix * ix - 6.0 * ix) * s - (15.0 * ix * ix - 1.0) * c) * ix;
    }
}

}  // namespace

double sphericalBesselJ(int l, double x) {
    checkArguments(l, x);
    if (x < kSeriesThreshold) {
        return besselSeries(l, x);
    }
    return besselClosed(l, x);
}

double sphericalBesselJPrime(int l, double x) {
    checkArguments(l, x);
    if (x < kSeriesThreshold) {
        return besselSeriesPrime(l, x);
    }
    if (l == 0) {
        return -besselClosed(1, x);
    }
    return besselClosed(l - 1, x) - (l + 1.0) / x * besselClosed(l, x);
}

double realSphericalHarmonic(int l, int m, double theta, double phi) {
    if (l < 0 || l > kMaxAngularOrder || m < -l || m > l) {
        throw DomainError("real spherical harmonic (" + std::to_string(l) + ", " + std::to_string(m) +
                          ") not supported");
    }
    const int am = m < 0 ? -m : m;
    const double u = std::cos(theta);
    const double s = std::sin(theta);

    // Associated Legendre P_l^m(u) without the Condon-Shortley phase.
    double legendre = 1.0;
    switch (l * 4 + am) {
        case 0: legendre = 1.0; break;
        case 4: legendre = u; break;
        case 5: legendre = s; break;
        case 8: legendre = 0.5 * (3.0 * u * u - 1.0); break;
        case 9: legendre = 3.0 * u * s; break;
        case 10: legendre = 3.0 * s * s; break;
        case 12: legendre = 0.5 * (5.0 * u * u * u - 3.0 * u); break;
        case 13: legendre = 1.5 * (5.0 * u * u - 1.0) * s; break;
        case 14: legendre = 15.0 * u * s * s; break;
        default: legendre = 15.0 * s * s * s; break;
    }

    double ratio = 1.0;  // (l-|m|)! / (l+|m|)!
    for (int k = l - am + 1; k <= l + am; ++k) {
        ratio /= k;
    }
    const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * ratio);
    if (m == 0) {
        return norm * legendre;
    }
    const double azimuthal = m > 0 ? std::cos(am * phi) : std::sin(am * phi);
    return std::numbers::sqrt2 * norm * legendre * azimuthal;
}

}  // namespace spindiff
