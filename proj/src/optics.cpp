#include "spindiff/optics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "spindiff/errors.hpp"
#include "spindiff/quadrature.hpp"

namespace spindiff {
namespace {

constexpr double kPi = std::numbers::pi;
// Gaussian tails beyond this many sigma are below 1e-14 and only serve as
// quadrature breakpoints.
constexpr double kGaussianReach = 8.0;

double gaussian2(double a, double b, double sigma) {
    return std::exp(-(a * a + b * b) / (2.0 * sigma * sigma));
}

// Integral over the cell in slices normal to z, resolving a Gaussian of width
// sigma centred on (cx, cy) in each slice.
template <class F>
double integratePumpFrame(const CellSpec& cell, double cx, double cy, double sigma, const BeamQuadrature& order,
                          F&& f) {
    const double reach = kGaussianReach * sigma;
    if (cell.geometry == Geometry::box) {
        const BoxSpec& b = cell.box;
        const std::array<double, 2> bx{cx - reach, cx + reach};
        const std::array<double, 2> by{cy - reach, cy + reach};
        const QuadratureRule qx = compositeGaussLegendre(order.transverse, -0.5 * b.lx, 0.5 * b.lx, bx);
        const QuadratureRule qy = compositeGaussLegendre(order.transverse, -0.5 * b.ly, 0.5 * b.ly, by);
        const QuadratureRule qz = gaussLegendre(order.axial, -0.5 * b.lz, 0.5 * b.lz);
        double sum = 0.0;
        for (std::size_t k = 0; k < qz.size(); ++k) {
            for (std::size_t i = 0; i < qx.size(); ++i) {
                for (std::size_t j = 0; j < qy.size(); ++j) {
                    sum += qx.weights[i] * qy.weights[j] * qz.weights[k] * f(Vec3{qx.nodes[i], qy.nodes[j], qz.nodes[k]});
                }
            }
        }
        return sum;
    }

    const double radius = cell.radius;
    const QuadratureRule qz = gaussLegendre(order.axial, -radius, radius);
    const QuadratureRule qphi = gaussLegendre(order.azimuthal, 0.0, 2.0 * kPi);
    const double c2 = cx * cx + cy * cy;
    const std::array<double, 1> radialBreak{reach};
    const QuadratureRule base = gaussLegendre(order.transverse);
    double sum = 0.0;
    for (std::size_t iz = 0; iz < qz.size(); ++iz) {
        const double z = qz.nodes[iz];
        const double a2 = radius * radius - z * z;
        double slice = 0.0;
        for (std::size_t ip = 0; ip < qphi.size(); ++ip) {
            const double ex = std::cos(qphi.nodes[ip]);
            const double ey = std::sin(qphi.nodes[ip]);
            // |c + rho e|^2 = a^2
            const double b = cx * ex + cy * ey;
            const double disc = b * b - (c2 - a2);
            if (disc <= 0.0) {
                continue;
            }
            const double root = std::sqrt(disc);
            const double hi = -b + root;
            const double lo = std::max(0.0, -b - root);
            if (hi <= lo) {
                continue;
            }
            const double rlo = c2 < a2 ? 0.0 : lo;
            const double ray = integratePiecewise(base, rlo, hi, radialBreak, [&](double rho) {
                return rho * f(Vec3{cx + rho * ex, cy + rho * ey, z});
            });
            slice += qphi.weights[ip] * ray;
        }
        sum += qz.weights[iz] * slice;
    }
    return sum;
}

// Integral over the part of the cell with z in [zlo, zhi], resolving a probe
// Gaussian of width sigma centred at (y, z) = (cy, cz).
template <class F>
double integrateProbeFrame(const CellSpec& cell, double zlo, double zhi, double cy, double cz, double sigma,
                           const BeamQuadrature& order, F&& f) {
    const double reach = kGaussianReach * sigma;
    const std::array<double, 2> bz{cz - reach, cz + reach};
    if (cell.geometry == Geometry::box) {
        const BoxSpec& b = cell.box;
        zlo = std::max(zlo, -0.5 * b.lz);
        zhi = std::min(zhi, 0.5 * b.lz);
        if (zhi <= zlo) {
            return 0.0;
        }
        const std::array<double, 2> by{cy - reach, cy + reach};
        const QuadratureRule qz = compositeGaussLegendre(order.axial, zlo, zhi, bz);
        const QuadratureRule qy = compositeGaussLegendre(order.transverse, -0.5 * b.ly, 0.5 * b.ly, by);
        const QuadratureRule qx = gaussLegendre(order.azimuthal, -0.5 * b.lx, 0.5 * b.lx);
        double sum = 0.0;
        for (std::size_t k = 0; k < qz.size(); ++k) {
            for (std::size_t j = 0; j < qy.size(); ++j) {
                for (std::size_t i = 0; i < qx.size(); ++i) {
                    sum += qx.weights[i] * qy.weights[j] * qz.weights[k] * f(Vec3{qx.nodes[i], qy.nodes[j], qz.nodes[k]});
                }
            }
        }
        return sum;
    }

    const double radius = cell.radius;
    zlo = std::max(zlo, -radius);
    zhi = std::min(zhi, radius);
    if (zhi <= zlo) {
        return 0.0;
    }
    const QuadratureRule qz = compositeGaussLegendre(order.axial, zlo, zhi, bz);
    const QuadratureRule qs = gaussLegendre(order.azimuthal, -1.0, 1.0);
    const QuadratureRule base = gaussLegendre(order.transverse);
    double sum = 0.0;
    for (std::size_t iz = 0; iz < qz.size(); ++iz) {
        const double z = qz.nodes[iz];
        const double a = std::sqrt(std::max(0.0, radius * radius - z * z));
        if (a == 0.0) {
            continue;
        }
        // y = a sin t removes the square-root behaviour of the chord at the rim.
        const std::array<double, 2> bt{std::asin(std::clamp((cy - reach) / a, -1.0, 1.0)),
                                       std::asin(std::clamp((cy + reach) / a, -1.0, 1.0))};
        const double slice = integratePiecewise(base, -0.5 * kPi, 0.5 * kPi, bt, [&](double t) {
            const double ct = std::cos(t);
            const double y = a * std::sin(t);
            const double half = a * ct;
            double chord = 0.0;
            for (std::size_t is = 0; is < qs.size(); ++is) {
                chord += qs.weights[is] * f(Vec3{half * qs.nodes[is], y, z});
            }
            return a * ct * half * chord;
        });
        sum += qz.weights[iz] * slice;
    }
    return sum;
}

double entryDistance(const CellSpec& cell) {
    return cell.geometry == Geometry::box ? 0.5 * cell.box.lz : cell.radius;
}

void requireAxis(const BeamSpec& beam, Axis axis, const char* what) {
    if (beam.axis != axis) {
        throw DomainError(std::string(what) + ": unsupported beam axis");
    }
}

}  // namespace

void BeamSpec::validate() const {
    if (!(waist > 0.0)) {
        throw DomainError("beam waist must be positive");
    }
    if (power < 0.0 || attenuation < 0.0) {
        throw DomainError("beam power and attenuation must be non-negative");
    }
}

double BeamSpec::peakIntensity() const {
    return power / (2.0 * kPi * waist * waist);
}

std::complex<double> pumpProjection(const BeamSpec& pump, const Mode& mode, const CellSpec& cell,
                                    const BeamQuadrature& order) {
    pump.validate();
    requireAxis(pump, Axis::z, "pump projection");
    const double entry = entryDistance(cell);
    const double value = integratePumpFrame(cell, pump.offsetA, pump.offsetB, pump.waist, order, [&](const Vec3& p) {
        return modeValueAt(mode, cell, p) * gaussian2(p.x - pump.offsetA, p.y - pump.offsetB, pump.waist) *
               std::exp(-pump.attenuation * (p.z + entry));
    });
    if (!std::isfinite(value)) {
        throw SolverError("pump projection quadrature produced a non-finite value");
    }
    return {value, 0.0};
}

double effectiveIntensity(const BeamSpec& pump, const Mode& mode, const CellSpec& cell, const BeamQuadrature& order) {
    pump.validate();
    requireAxis(pump, Axis::z, "effective intensity");
    const double entry = entryDistance(cell);
    double weighted = 0.0;
    double total = 0.0;
    weighted = integratePumpFrame(cell, pump.offsetA, pump.offsetB, pump.waist, order, [&](const Vec3& p) {
        const double s = modeValueAt(mode, cell, p);
        return s * s * gaussian2(p.x - pump.offsetA, p.y - pump.offsetB, pump.waist) *
               std::exp(-pump.attenuation * (p.z + entry));
    });
    total = integratePumpFrame(cell, pump.offsetA, pump.offsetB, pump.waist, order, [&](const Vec3& p) {
        const double s = modeValueAt(mode, cell, p);
        return s * s;
    });
    return pump.peakIntensity() * weighted / total;
}

std::vector<double> slitImage(const Mode& mode, const BeamSpec& probe, const SlitSpec& slit, const CellSpec& cell,
                              const BeamQuadrature& order) {
    probe.validate();
    requireAxis(probe, Axis::x, "slit image");
    if (!(slit.width > 0.0)) {
        throw DomainError("slit width must be positive");
    }
    const double limit = cell.geometry == Geometry::box ? 0.5 * cell.box.lz : cell.radius;
    std::vector<double> image;
    image.reserve(slit.positions.size());
    for (double z0 : slit.positions) {
        if (std::abs(z0) > limit * (1.0 + 1e-12)) {
            throw DomainError(fmt::format("slit position {:.6g} m outside the cell", z0));
        }
        image.push_back(integrateProbeFrame(
            cell, z0 - 0.5 * slit.width, z0 + 0.5 * slit.width, probe.offsetA, probe.offsetB, probe.waist, order,
            [&](const Vec3& p) {
                return modeValueAt(mode, cell, p) * gaussian2(p.y - probe.offsetA, p.z - probe.offsetB, probe.waist);
            }));
    }
    return image;
}

std::complex<double> couplingJ(std::complex<double> gradient, double gyromagneticRatio, const Mode& m1,
                               const Mode& m2, const CellSpec& cell, const QuadratureOrder& order) {
    const std::complex<double> zOverlap =
        overlapIntegral(m2, m1, [](const Vec3& p) { return std::complex<double>(p.z, 0.0); }, cell, order);
    return std::complex<double>(0.0, -1.0) * gyromagneticRatio * gradient * zOverlap;
}

GradientEstimate estimateGFromImaging(std::span<const double> positions, std::span<const double> frequency,
                                      std::span<const double> linewidth, double gyromagneticRatio) {
    const std::size_t n = positions.size();
    if (n < 3 || frequency.size() != n || linewidth.size() != n) {
        throw DomainError("imaging estimate needs at least 3 positions with matching profiles");
    }
    if (gyromagneticRatio == 0.0) {
        throw DomainError("gyromagnetic ratio must be non-zero");
    }
    double meanZ = 0.0;
    for (double z : positions) {
        meanZ += z;
    }
    meanZ /= static_cast<double>(n);
    double sxx = 0.0;
    for (double z : positions) {
        sxx += (z - meanZ) * (z - meanZ);
    }
    if (sxx == 0.0) {
        throw DomainError("imaging positions are all identical");
    }
    auto slope = [&](std::span<const double> v) {
        double mean = 0.0;
        for (double x : v) {
            mean += x;
        }
        mean /= static_cast<double>(n);
        double sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sxy += (positions[i] - meanZ) * (v[i] - mean);
        }
        return sxy / sxx;
    };
    GradientEstimate est;
    est.frequencySlope = slope(frequency);
    est.linewidthSlope = slope(linewidth);
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    est.flat = constant(frequency) && constant(linewidth);
    if (est.flat) {
        est.frequencySlope = 0.0;
        est.linewidthSlope = 0.0;
    }
    est.gradient = std::complex<double>(est.frequencySlope, -est.linewidthSlope) / gyromagneticRatio;
    return est;
}

void writeImagingCsv(std::ostream& out, const std::vector<ImagingRow>& rows) {
    out << "z0_mm,mode_id,amplitude,frequency_Hz,linewidth_Hz\n";
    for (const ImagingRow& r : rows) {
        out << fmt::format("{:.12g},{},{:.12g},{:.12g},{:.12g}\n", r.z0 * 1e3, r.modeId, r.amplitude, r.frequencyHz,
                           r.linewidthHz);
    }
}

}  // namespace spindiff
