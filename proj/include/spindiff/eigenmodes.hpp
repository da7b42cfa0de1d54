#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spindiff/geometry.hpp"

namespace spindiff {

enum class Geometry { sphere, box };

/// Rectangular cell, centred on the origin. Edges in metres.
struct BoxSpec {
    double lx = 4e-3;
    double ly = 4e-3;
    double lz = 2e-3;

    void validate() const;
    [[nodiscard]] double volume() const noexcept { return lx * ly * lz; }
};

/// Cell geometry and wall parameters.
///
/// For the sphere, the wall enters through the mean free path and the
/// dimensionless wall parameter N of the Robin condition. The box ignores both
/// and uses Dirichlet walls.
struct CellSpec {
    double radius = 10e-3;
    double meanFreePath = 0.0;
    double wallParameter = 1.0;
    Geometry geometry = Geometry::sphere;
    BoxSpec box{};

    void validate() const;
    /// Largest distance from the centre to the wall.
    [[nodiscard]] double extent() const noexcept;
};

/// Sphere modes use (n, l, m); box modes use (nx, ny, nz) >= 1.
/// m follows the real-harmonic convention of realSphericalHarmonic().
struct ModeIndex {
    Geometry geometry = Geometry::sphere;
    int n = 0;
    int l = 0;
    int m = 0;
    int nx = 1;
    int ny = 1;
    int nz = 1;

    /// Orientation label of the harmonic: "0" for l = 0, "z" for m = 0,
    /// "x"/"y" for the l = 1 transverse dipoles, "c<m>"/"s<m>" otherwise.
    [[nodiscard]] std::string orientation() const;
    /// Compact identifier such as "s000", "s01z" or "b112".
    [[nodiscard]] std::string label() const;

    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// Diffusion and homogeneous parameters that turn a wavenumber into a rate.
struct ModeRates {
    double diffusion = 0.0;    // D, m^2/s
    double decoherence = 0.0;  // homogeneous Gamma, 1/s
    double frequency = 0.0;    // precession frequency, rad/s
};

struct Mode {
    ModeIndex index{};
    double k = 0.0;           // 1/m
    double decayRate = 0.0;   // D k^2 + Gamma, 1/s
    double frequency = 0.0;   // rad/s
    double norm = 1.0;        // unit L2 norm over the cell
};

/// Tensor-product Gauss-Legendre orders (r, cos theta, phi) for the sphere;
/// the box uses `radial` points along each edge.
struct QuadratureOrder {
    int radial = 64;
    int polar = 32;
    int azimuthal = 32;

    static constexpr int kMinimum = 4;
    void validate() const;
};

/// Right-hand side of the Robin condition: (2/3) coth(1/(2N)) lambda k.
double robinWallFactor(const CellSpec& cell, double k);

/// -j_l(kR)/j_l'(kR) - robinWallFactor, scaled by |j_l'| / (1 + wall factor).
/// Zero exactly at a solution; infinite where j_l' vanishes.
double robinResidual(const CellSpec& cell, int l, double k);

/// The `count` smallest positive wavenumbers of the Robin problem for angular
/// order l, strictly increasing. Throws SolverError if the scan window does not
/// contain enough roots.
std::vector<double> solveSphereRoots(const CellSpec& cell, int l, int count);

struct BoxRoot {
    ModeIndex index;
    double k = 0.0;
};

/// The `count` lowest Dirichlet modes of the box. Ties in k are ordered by
/// (nz, ny, nx) ascending.
std::vector<BoxRoot> solveBoxModes(const BoxSpec& box, int count);

/// Normalised sphere mode with radial index n (0-based), angular order l and
/// real-harmonic index m.
Mode makeSphereMode(const CellSpec& cell, int n, int l, int m, const ModeRates& rates);

/// Normalised Dirichlet box mode.
Mode makeBoxMode(const BoxSpec& box, int nx, int ny, int nz, const ModeRates& rates);

/// Mode amplitude at a point given in spherical coordinates about the centre.
double modeValue(const Mode& mode, const CellSpec& cell, const SphericalPoint& point);

/// Mode amplitude at a Cartesian point.
double modeValueAt(const Mode& mode, const CellSpec& cell, const Vec3& point);

/// Complex spatial weight w(r).
using SpatialWeight = std::function<std::complex<double>(const Vec3&)>;

/// Integral of m1* w m2 over the cell by tensor-product Gauss-Legendre quadrature.
std::complex<double> overlapIntegral(const Mode& m1, const Mode& m2, const SpatialWeight& weight,
                                     const CellSpec& cell, const QuadratureOrder& order = {});

/// Integral of an arbitrary real function over the cell volume.
double integrateOverCell(const CellSpec& cell, const std::function<double(const Vec3&)>& f,
                         const QuadratureOrder& order = {});

/// All sphere modes with l <= lmax, n < radialCount and every m, sorted by k.
std::vector<Mode> sphereModeCatalog(const CellSpec& cell, int lmax, int radialCount, const ModeRates& rates);

/// CSV with columns n, l, p, kR, k, gamma_m, norm.
void writeModeCatalogCsv(std::ostream& out, const std::vector<Mode>& modes, const CellSpec& cell);

}  // namespace spindiff
