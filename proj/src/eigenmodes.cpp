#include "spindiff/eigenmodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "spindiff/errors.hpp"
#include "spindiff/quadrature.hpp"
#include "spindiff/special_functions.hpp"

namespace spindiff {
namespace {

constexpr double kPi = std::numbers::pi;

// Bisection on a sign-changing bracket down to a relative width of ~1e-15.
template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double radialNormSquared(const CellSpec& cell, int l, double k) {
    const QuadratureRule rule = gaussLegendre(128, 0.0, cell.radius);
    return integrate(rule, [&](double r) {
        const double j = sphericalBesselJ(l, k * r);
        return j * j * r * r;
    });
}

}  // namespace

void BoxSpec::validate() const {
    if (!(lx > 0.0 && ly > 0.0 && lz > 0.0)) {
        throw DomainError("box edges must be positive");
    }
}

void CellSpec::validate() const {
    if (geometry == Geometry::box) {
        box.validate();
        return;
    }
    if (!(radius > 0.0)) {
        throw DomainError("cell radius must be positive");
    }
    if (!(meanFreePath >= 0.0)) {
        throw DomainError("mean free path must be non-negative");
    }
    if (!(wallParameter > 0.0)) {
        throw DomainError("wall parameter N must be positive");
    }
}

double CellSpec::extent() const noexcept {
    if (geometry == Geometry::box) {
        return 0.5 * std::max({box.lx, box.ly, box.lz});
    }
    return radius;
}

void QuadratureOrder::validate() const {
    if (radial < kMinimum || polar < kMinimum || azimuthal < kMinimum) {
        throw ConfigError(fmt::format("quadrature order ({}, {}, {}) below minimum {}", radial, polar, azimuthal,
                                      kMinimum));
    }
}

std::string ModeIndex::orientation() const {
    if (geometry == Geometry::box) {
        return std::to_string(nz);
    }
    if (l == 0) {
        return "0";
    }
    if (m == 0) {
        return "z";
    }
    if (l == 1) {
        return m > 0 ? "x" : "y";
    }
    return (m > 0 ? "c" : "s") + std::to_string(std::abs(m));
}

std::string ModeIndex::label() const {
    if (geometry == Geometry::box) {
        return fmt::format("b{}{}{}", nx, ny, nz);
    }
    return fmt::format("s{}{}{}", n, l, orientation());
}

double robinWallFactor(const CellSpec& cell, double k) {
    if (!(cell.wallParameter > 0.0)) {
        throw DomainError("wall parameter N must be positive");
    }
    const double e = std::exp(-1.0 / cell.wallParameter);
    return (2.0 / 3.0) * (1.0 + e) / (1.0 - e) * cell.meanFreePath * k;
}

double robinResidual(const CellSpec& cell, int l, double k) {
    const double x = k * cell.radius;
    const double j = sphericalBesselJ(l, x);
    const double wall = robinWallFactor(cell, k);
    const double dj = sphericalBesselJPrime(l, x);
    // -j/j' - wall scaled by |j'| / (1 + wall); infinite at poles of the quotient.
    const double scale = std::abs(dj) * (1.0 + std::abs(wall));
    return scale > 0.0 ? (j + wall * dj) / scale : std::numeric_limits<double>::infinity();
}

std::vector<double> solveSphereRoots(const CellSpec& cell, int l, int count) {
    cell.validate();
    if (count < 1) {
        throw DomainError("root count must be at least 1");
    }
    if (l < 0 || l > kMaxAngularOrder) {
        throw DomainError("angular order outside [0, 3]");
    }
    const double radius = cell.radius;
    // j_l + a x j_l' with a = robinWallFactor / k; the product form has no poles
    // where j_l' vanishes, so sign changes are genuine roots.
    const double a = robinWallFactor(cell, 1.0) / radius;
    auto f = [&](double x) { return sphericalBesselJ(l, x) + a * x * sphericalBesselJPrime(l, x); };

    const double start = 1e-8;
    const double step = kPi / 64.0;
    const double window = kPi * (count + 0.5 * l + 2.0);

    std::vector<double> roots;
    roots.reserve(count);
    double x0 = start;
    double f0 = f(x0);
    while (x0 < window && static_cast<int>(roots.size()) < count) {
        const double x1 = x0 + step;
        const double f1 = f(x1);
        if (f1 == 0.0) {
            roots.push_back(x1);
            x0 = x1 + 1e-9;
            f0 = f(x0);
            continue;
        }
        if ((f0 < 0.0) != (f1 < 0.0)) {
            const double x = bisect(f, x0, x1);
            // Reject anything that is not a zero of the original quotient form.
            if (std::abs(robinResidual(cell, l, x / radius)) < 1e-10) {
                roots.push_back(x);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    if (static_cast<int>(roots.size()) < count) {
        throw SolverError(fmt::format("found {} of {} Robin roots for l={} in kR window (0, {:.6g}] (wall factor {:.6g})",
                                      roots.size(), count, l, window, a * radius));
    }
    for (double& x : roots) {
        x /= radius;
    }
    return roots;
}

std::vector<BoxRoot> solveBoxModes(const BoxSpec& box, int count) {
    box.validate();
    if (count < 1) {
        throw DomainError("mode count must be at least 1");
    }
    std::vector<BoxRoot> all;
    all.reserve(static_cast<std::size_t>(count) * count * count);
    for (int nx = 1; nx <= count; ++nx) {
        for (int ny = 1; ny <= count; ++ny) {
            for (int nz = 1; nz <= count; ++nz) {
                const double qx = nx / box.lx;
                const double qy = ny / box.ly;
                const double qz = nz / box.lz;
                ModeIndex idx;
                idx.geometry = Geometry::box;
                idx.nx = nx;
                idx.ny = ny;
                idx.nz = nz;
                all.push_back({idx, kPi * std::sqrt(qx * qx + qy * qy + qz * qz)});
            }
        }
    }
    auto key = [](const BoxRoot& b) { return std::tie(b.index.nz, b.index.ny, b.index.nx); };
    std::sort(all.begin(), all.end(), [&](const BoxRoot& a, const BoxRoot& b) {
        if (std::abs(a.k - b.k) > 1e-12 * std::max(a.k, b.k)) {
            return a.k < b.k;
        }
        return key(a) < key(b);
    });
    all.resize(count);
    return all;
}

Mode makeSphereMode(const CellSpec& cell, int n, int l, int m, const ModeRates& rates) {
    if (n < 0) {
        throw DomainError("radial index must be non-negative");
    }
    if (m < -l || m > l) {
        throw DomainError("harmonic index outside [-l, l]");
    }
    const std::vector<double> roots = solveSphereRoots(cell, l, n + 1);
    Mode mode;
    mode.index.geometry = Geometry::sphere;
    mode.index.n = n;
    mode.index.l = l;
    mode.index.m = m;
    mode.k = roots[n];
    mode.decayRate = rates.diffusion * mode.k * mode.k + rates.decoherence;
    mode.frequency = rates.frequency;
    mode.norm = 1.0 / std::sqrt(radialNormSquared(cell, l, mode.k));
    return mode;
}

Mode makeBoxMode(const BoxSpec& box, int nx, int ny, int nz, const ModeRates& rates) {
    box.validate();
    if (nx < 1 || ny < 1 || nz < 1) {
        throw DomainError("box mode indices must be >= 1");
    }
    Mode mode;
    mode.index.geometry = Geometry::box;
    mode.index.nx = nx;
    mode.index.ny = ny;
    mode.index.nz = nz;
    const double qx = nx / box.lx;
    const double qy = ny / box.ly;
    const double qz = nz / box.lz;
    mode.k = kPi * std::sqrt(qx * qx + qy * qy + qz * qz);
    mode.decayRate = rates.diffusion * mode.k * mode.k + rates.decoherence;
    mode.frequency = rates.frequency;
    mode.norm = std::sqrt(8.0 / box.volume());
    return mode;
}

double modeValueAt(const Mode& mode, const CellSpec& cell, const Vec3& p) {
    if (mode.index.geometry == Geometry::box) {
        const BoxSpec& b = cell.box;
        constexpr double slack = 1.0 + 1e-12;
        if (std::abs(p.x) > 0.5 * b.lx * slack || std::abs(p.y) > 0.5 * b.ly * slack ||
            std::abs(p.z) > 0.5 * b.lz * slack) {
            throw DomainError("point outside the box cell");
        }
        return mode.norm * std::sin(mode.index.nx * kPi * (p.x / b.lx + 0.5)) *
               std::sin(mode.index.ny * kPi * (p.y / b.ly + 0.5)) *
               std::sin(mode.index.nz * kPi * (p.z / b.lz + 0.5));
    }
    return modeValue(mode, cell, toSpherical(p));
}

double modeValue(const Mode& mode, const CellSpec& cell, const SphericalPoint& point) {
    if (mode.index.geometry == Geometry::box) {
        return modeValueAt(mode, cell, toCartesian(point));
    }
    if (point.r > cell.radius * (1.0 + 1e-12) || point.r < 0.0) {
        throw DomainError(fmt::format("radius {:.6g} m outside the cell (R = {:.6g} m)", point.r, cell.radius));
    }
    const double r = std::min(point.r, cell.radius);
    return mode.norm * sphericalBesselJ(mode.index.l, mode.k * r) *
           realSphericalHarmonic(mode.index.l, mode.index.m, point.theta, point.phi);
}

double integrateOverCell(const CellSpec& cell, const std::function<double(const Vec3&)>& f,
                         const QuadratureOrder& order) {
    order.validate();
    if (cell.geometry == Geometry::box) {
        const BoxSpec& b = cell.box;
        const QuadratureRule qx = gaussLegendre(order.radial, -0.5 * b.lx, 0.5 * b.lx);
        const QuadratureRule qy = gaussLegendre(order.radial, -0.5 * b.ly, 0.5 * b.ly);
        const QuadratureRule qz = gaussLegendre(order.radial, -0.5 * b.lz, 0.5 * b.lz);
        double sum = 0.0;
        for (std::size_t i = 0; i < qx.size(); ++i) {
            for (std::size_t j = 0; j < qy.size(); ++j) {
                for (std::size_t k = 0; k < qz.size(); ++k) {
                    sum += qx.weights[i] * qy.weights[j] * qz.weights[k] *
                           f({qx.nodes[i], qy.nodes[j], qz.nodes[k]});
                }
            }
        }
        return sum;
    }
    const QuadratureRule qr = gaussLegendre(order.radial, 0.0, cell.radius);
    const QuadratureRule qu = gaussLegendre(order.polar, -1.0, 1.0);
    const QuadratureRule qp = gaussLegendre(order.azimuthal, 0.0, 2.0 * kPi);
    double sum = 0.0;
    for (std::size_t i = 0; i < qr.size(); ++i) {
        const double r = qr.nodes[i];
        for (std::size_t j = 0; j < qu.size(); ++j) {
            const double u = qu.nodes[j];
            const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (std::size_t k = 0; k < qp.size(); ++k) {
                const double phi = qp.nodes[k];
                const Vec3 p{r * s * std::cos(phi), r * s * std::sin(phi), r * u};
                sum += qr.weights[i] * qu.weights[j] * qp.weights[k] * r * r * f(p);
            }
        }
    }
    return sum;
}

std::complex<double> overlapIntegral(const Mode& m1, const Mode& m2, const SpatialWeight& weight,
                                     const CellSpec& cell, const QuadratureOrder& order) {
    order.validate();
    if (m1.index.geometry != cell.geometry || m2.index.geometry != cell.geometry) {
        throw DomainError("modes and cell geometry differ");
    }
    const double re = integrateOverCell(
        cell, [&](const Vec3& p) { return modeValueAt(m1, cell, p) * weight(p).real() * modeValueAt(m2, cell, p); },
        order);
    const double im = integrateOverCell(
        cell, [&](const Vec3& p) { return modeValueAt(m1, cell, p) * weight(p).imag() * modeValueAt(m2, cell, p); },
        order);
    return {re, im};
}

std::vector<Mode> sphereModeCatalog(const CellSpec& cell, int lmax, int radialCount, const ModeRates& rates) {
    if (lmax < 0 || lmax > kMaxAngularOrder) {
        throw DomainError("lmax outside [0, 3]");
    }
    std::vector<Mode> modes;
    for (int l = 0; l <= lmax; ++l) {
        const std::vector<double> roots = solveSphereRoots(cell, l, radialCount);
        for (int n = 0; n < radialCount; ++n) {
            const double normSq = radialNormSquared(cell, l, roots[n]);
            for (int m : {0, 1, -1, 2, -2, 3, -3}) {
                if (std::abs(m) > l) {
                    continue;
                }
                Mode mode;
                mode.index.n = n;
                mode.index.l = l;
                mode.index.m = m;
                mode.k = roots[n];
                mode.decayRate = rates.diffusion * mode.k * mode.k + rates.decoherence;
                mode.frequency = rates.frequency;
                mode.norm = 1.0 / std::sqrt(normSq);
                modes.push_back(mode);
            }
        }
    }
    std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.k < b.k; });
    return modes;
}

void writeModeCatalogCsv(std::ostream& out, const std::vector<Mode>& modes, const CellSpec& cell) {
    out << "n,l,p,kR,k,gamma_m,norm\n";
    const double scale = cell.extent();
    for (const Mode& m : modes) {
        const int n = m.index.geometry == Geometry::box ? m.index.nx : m.index.n;
        const int l = m.index.geometry == Geometry::box ? m.index.ny : m.index.l;
        out << fmt::format("{},{},{},{:.12g},{:.12g},{:.12g},{:.12g}\n", n, l, m.index.orientation(),
                           m.k * scale, m.k, m.decayRate, m.norm);
    }
}

}  // namespace spindiff
