#pragma once

#include <algorithm>
#include <cmath>

namespace spindiff {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Spherical coordinates about the cell centre; theta is measured from +z.
struct SphericalPoint {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

inline Vec3 toCartesian(const SphericalPoint& p) {
    const double s = std::sin(p.theta);
    return {p.r * s * std::cos(p.phi), p.r * s * std::sin(p.phi), p.r * std::cos(p.theta)};
}

inline SphericalPoint toSpherical(const Vec3& v) {
    const double r = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    if (r == 0.0) {
        return {0.0, 0.0, 0.0};
    }
    return {r, std::acos(std::clamp(v.z / r, -1.0, 1.0)), std::atan2(v.y, v.x)};
}

}  // namespace spindiff
