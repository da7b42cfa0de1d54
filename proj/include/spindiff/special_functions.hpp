#pragma once

namespace spindiff {

/// Highest angular order supported by the Bessel and harmonic routines.
inline constexpr int kMaxAngularOrder = 3;

/// Spherical Bessel function of the first kind j_l(x), 0 <= l <= 3, x >= 0.
/// Closed trigonometric forms; power series below x = 1.
double sphericalBesselJ(int l, double x);

/// Derivative d/dx j_l(x).
double sphericalBesselJPrime(int l, double x);

/// Real spherical harmonic, unit-normalised over the sphere.
///
/// m = 0 is the z-oriented harmonic (proportional to P_l(cos theta)); m > 0
/// carries cos(m phi) and m < 0 carries sin(|m| phi). For l = 1 this gives the
/// z, x and y dipoles for m = 0, 1, -1.
double realSphericalHarmonic(int l, int m, double theta, double phi);

}  // namespace spindiff
