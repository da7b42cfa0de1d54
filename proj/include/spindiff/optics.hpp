#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spindiff/eigenmodes.hpp"

namespace spindiff {

enum class Axis { x, y, z };

/// Gaussian beam. The pump propagates along z, the probe along x; the two
/// offsets are the beam centre in the transverse plane, ordered (x, y) for a
/// z beam and (y, z) for an x beam.
struct BeamSpec {
    Axis axis = Axis::z;
    double waist = 3e-3;        // sigma of the intensity profile, m
    double offsetA = 0.0;       // m
    double offsetB = 0.0;       // m
    double power = 0.0;         // W
    double attenuation = 0.0;   // 1/m along the propagation direction

    void validate() const;
    /// Peak intensity P / (2 pi sigma^2), W/m^2.
    [[nodiscard]] double peakIntensity() const;
};

/// Boxcar slit scanned along z in front of the probe.
struct SlitSpec {
    double width = 1e-3;
    std::vector<double> positions;
};

/// Orders for beam-aligned quadrature: along the beam-normal slicing axis, in
/// the transverse radius (per sub-interval) and around the beam axis.
struct BeamQuadrature {
    int axial = 64;
    int transverse = 48;
    int azimuthal = 32;

    [[nodiscard]] BeamQuadrature doubled() const { return {2 * axial, 2 * transverse, 2 * azimuthal}; }
};

/// Initial amplitude of a mode: integral of s_m times the Gaussian pump
/// envelope times exp(-alpha (z + z_entry)), with z_entry the distance from the
/// centre to the entry wall.
std::complex<double> pumpProjection(const BeamSpec& pump, const Mode& mode, const CellSpec& cell,
                                    const BeamQuadrature& order = {});

/// Mode-weighted pump intensity  int |s|^2 I dV / int |s|^2 dV  (W/m^2).
double effectiveIntensity(const BeamSpec& pump, const Mode& mode, const CellSpec& cell,
                          const BeamQuadrature& order = {});

/// Probe signal of one mode behind a slit centred at each z0: integral of s_m
/// times the probe envelope exp(-(y^2 + z^2)/(2 sigma^2)) over the slit band.
std::vector<double> slitImage(const Mode& mode, const BeamSpec& probe, const SlitSpec& slit, const CellSpec& cell,
                              const BeamQuadrature& order = {});

/// J = -i gamma G int s2* z s1 dV.
std::complex<double> couplingJ(std::complex<double> gradient, double gyromagneticRatio, const Mode& m1,
                               const Mode& m2, const CellSpec& cell, const QuadratureOrder& order = {});

struct GradientEstimate {
    std::complex<double> gradient;  // G, T/m equivalent
    double frequencySlope = 0.0;    // d omega / d z0, rad/s/m
    double linewidthSlope = 0.0;    // d Gamma / d z0, 1/s/m
    bool flat = false;              // both profiles constant
};

/// Linear least-squares slopes of the imaged frequency and linewidth profiles,
/// combined as G = (d omega/dz - i d Gamma/dz) / gamma so that a pure frequency
/// gradient yields a purely imaginary J.
GradientEstimate estimateGFromImaging(std::span<const double> positions, std::span<const double> frequency,
                                      std::span<const double> linewidth, double gyromagneticRatio);

/// Imaging CSV row.
struct ImagingRow {
    double z0 = 0.0;  // m
    std::string modeId;
    double amplitude = 0.0;
    double frequencyHz = 0.0;
    double linewidthHz = 0.0;
};

/// CSV with columns z0_mm, mode_id, amplitude, frequency_Hz, linewidth_Hz.
void writeImagingCsv(std::ostream& out, const std::vector<ImagingRow>& rows);

}  // namespace spindiff
