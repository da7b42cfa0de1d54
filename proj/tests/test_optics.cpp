#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "spindiff/eigenmodes.hpp"
#include "spindiff/errors.hpp"
#include "spindiff/optics.hpp"
#include "spindiff/quadrature.hpp"

using namespace spindiff;
constexpr double pi = std::numbers::pi;

namespace {

const ModeRates kRates{4e-5, 1.0, 0.0};

struct Fixture {
    CellSpec cell;
    Mode s000, s100, dipole, xDipole, quadrupole;

    Fixture() {
        cell.meanFreePath = 0.6e-3;
        s000 = makeSphereMode(cell, 0, 0, 0, kRates);
        s100 = makeSphereMode(cell, 1, 0, 0, kRates);
        dipole = makeSphereMode(cell, 0, 1, 0, kRates);
        xDipole = makeSphereMode(cell, 0, 1, 1, kRates);
        quadrupole = makeSphereMode(cell, 0, 2, 0, kRates);
    }
};

BeamSpec pumpBeam(double waist, double attenuation = 0.0) {
    BeamSpec b;
    b.axis = Axis::z;
    b.waist = waist;
    b.power = 1e-3;
    b.attenuation = attenuation;
    return b;
}

BeamSpec probeBeam(double waist) {
    BeamSpec b;
    b.axis = Axis::x;
    b.waist = waist;
    return b;
}

// Projection of an l = 0 mode onto a constant by simple radial quadrature with
// the standard-library Bessel function.
double uniformProjection(const CellSpec& cell, double k) {
    const QuadratureRule r = gaussLegendre(200, 0.0, cell.radius);
    const double first = integrate(r, [&](double x) { return oracle::besselJ(0, k * x) * x * x; });
    const double second = integrate(r, [&](double x) {
        const double j = oracle::besselJ(0, k * x);
        return j * j * x * x;
    });
    return std::sqrt(4.0 * pi) * first / std::sqrt(second);
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_SUITE("pump projection") {
    TEST_CASE_FIXTURE(Fixture, "odd-in-z modes get no amplitude without attenuation") {
        for (double waist : {0.5e-3, 3e-3, 20e-3}) {
            CHECK(std::abs(pumpProjection(pumpBeam(waist), dipole, cell)) < 1e-10);
        }
    }

    TEST_CASE_FIXTURE(Fixture, "a uniform beam only excites l = 0") {
        const BeamSpec wide = pumpBeam(1e3);
        CHECK(pumpProjection(wide, s000, cell).real() ==
              doctest::Approx(uniformProjection(cell, s000.k)).epsilon(1e-9));
        CHECK(pumpProjection(wide, s100, cell).real() ==
              doctest::Approx(uniformProjection(cell, s100.k)).epsilon(1e-9));
        CHECK(std::abs(pumpProjection(wide, dipole, cell)) < 1e-10);
        CHECK(std::abs(pumpProjection(wide, xDipole, cell)) < 1e-10);
        CHECK(std::abs(pumpProjection(wide, quadrupole, cell)) < 1e-10);
    }

    TEST_CASE_FIXTURE(Fixture, "attenuation from the -z wall gives the z dipole a negative amplitude") {
        const BeamSpec beam = pumpBeam(0.5 * cell.radius, 2.0 / cell.radius);
        const double c = pumpProjection(beam, dipole, cell).real();
        const double fine = pumpProjection(beam, dipole, cell, BeamQuadrature{}.doubled()).real();
        CHECK(c < 0.0);
        CHECK(std::abs(c) > 1e-6);
        CHECK(relative(c, fine) < 1e-6);
    }

    TEST_CASE_FIXTURE(Fixture, "transverse axis is rejected") {
        BeamSpec beam = pumpBeam(1e-3);
        beam.axis = Axis::x;
        CHECK_THROWS_AS(pumpProjection(beam, s000, cell), DomainError);
    }
}

TEST_SUITE("effective intensity") {
    TEST_CASE_FIXTURE(Fixture, "a uniform beam gives the peak intensity for every mode") {
        const BeamSpec wide = pumpBeam(1e3);
        for (const Mode* m : {&s000, &s100, &dipole, &xDipole, &quadrupole}) {
            CHECK(effectiveIntensity(wide, *m, cell) == doctest::Approx(wide.peakIntensity()).epsilon(1e-8));
        }
    }

    TEST_CASE_FIXTURE(Fixture, "normalised effective intensity grows with the waist") {
        for (const Mode* m : {&s000, &s100, &dipole}) {
            double previous = 0.0;
            for (double waist : {0.5e-3, 1e-3, 2e-3, 4e-3, 8e-3, 16e-3}) {
                const BeamSpec beam = pumpBeam(waist);
                const double fraction = effectiveIntensity(beam, *m, cell) / beam.peakIntensity();
                CHECK(fraction > previous);
                CHECK(fraction <= 1.0);
                previous = fraction;
            }
        }
    }

    TEST_CASE_FIXTURE(Fixture, "mode ratio never exceeds the pointwise bound of |s2|^2 / |s1|^2") {
        // The ratio is a weighted mean of |s2|^2/|s1|^2 divided by a weighted mean
        // of 1 under the same |s1|^2 I weight, so it is bounded by the supremum.
        const QuadratureRule r = gaussLegendre(400, 1e-9, cell.radius);
        double bound = 0.0;
        for (double x : r.nodes) {
            for (double mu : {1.0, 0.5, 0.0}) {
                const SphericalPoint p{x, std::acos(mu), 0.0};
                const double a = modeValue(s000, cell, p);
                bound = std::max(bound, std::pow(modeValue(dipole, cell, p) / a, 2));
                bound = std::max(bound, std::pow(modeValue(s100, cell, p) / a, 2));
            }
        }
        for (double waist = 0.5e-3; waist <= cell.radius; waist += 0.5e-3) {
            const BeamSpec beam = pumpBeam(waist);
            const double base = effectiveIntensity(beam, s000, cell);
            CHECK(effectiveIntensity(beam, s100, cell) / base <= bound);
            CHECK(effectiveIntensity(beam, dipole, cell) / base <= bound);
        }
    }
}

TEST_SUITE("slit images") {
    TEST_CASE_FIXTURE(Fixture, "z dipole image vanishes at the centre and integrates to zero") {
        SlitSpec slit;
        for (double z = -8e-3; z <= 8.0001e-3; z += 1e-3) {
            slit.positions.push_back(z);
        }
        const std::vector<double> image = slitImage(dipole, probeBeam(3e-3), slit, cell);
        const std::vector<double> base = slitImage(s000, probeBeam(3e-3), slit, cell);
        double sumDipole = 0.0;
        double sumBase = 0.0;
        for (std::size_t i = 0; i < image.size(); ++i) {
            sumDipole += image[i];
            sumBase += base[i];
        }
        CHECK(std::abs(image[8]) < 1e-12);
        CHECK(std::abs(sumDipole) < 1e-10 * sumBase);
        CHECK(sumBase > 0.0);
    }

    TEST_CASE_FIXTURE(Fixture, "fundamental image is even with its maximum at the centre") {
        SlitSpec slit;
        slit.positions = {-6e-3, -3e-3, -1e-3, 0.0, 1e-3, 3e-3, 6e-3};
        const std::vector<double> image = slitImage(s000, probeBeam(3e-3), slit, cell);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(image[i] == doctest::Approx(image[6 - i]).epsilon(1e-12));
            CHECK(image[i] < image[3]);
        }
    }

    TEST_CASE_FIXTURE(Fixture, "radial mode image has a node that is stable under refinement") {
        auto at = [&](double z0, const BeamQuadrature& order) {
            SlitSpec slit;
            slit.positions = {z0};
            return slitImage(s100, probeBeam(3e-3), slit, cell, order)[0];
        };
        const BeamQuadrature base;
        const BeamQuadrature fine = base.doubled();
        REQUIRE((at(0.0, base) < 0.0) != (at(0.8 * cell.radius, base) < 0.0));
        const double node = oracle::bisect([&](double z) { return at(z, base); }, 0.0, 0.8 * cell.radius);
        const double nodeFine = oracle::bisect([&](double z) { return at(z, fine); }, 0.0, 0.8 * cell.radius);
        CHECK(node > 0.5e-3);
        CHECK(std::abs(node - nodeFine) / node < 1e-6);
    }

    TEST_CASE_FIXTURE(Fixture, "positions outside the cell are rejected") {
        SlitSpec slit;
        slit.positions = {1.5 * cell.radius};
        CHECK_THROWS_AS(slitImage(s000, probeBeam(3e-3), slit, cell), DomainError);
    }

    TEST_CASE_FIXTURE(Fixture, "probe must travel along x") {
        SlitSpec slit;
        slit.positions = {0.0};
        CHECK_THROWS_AS(slitImage(s000, pumpBeam(3e-3), slit, cell), DomainError);
    }
}

TEST_SUITE("coupling") {
    TEST_CASE_FIXTURE(Fixture, "parity-forbidden couplings vanish") {
        const std::complex<double> g(3e-7, 1e-7);
        CHECK(std::abs(couplingJ(g, 2.2e10, s000, s000, cell)) < 1e-10);
        CHECK(std::abs(couplingJ(g, 2.2e10, s000, s100, cell)) < 1e-10);
        CHECK(std::abs(couplingJ(g, 2.2e10, s000, xDipole, cell)) < 1e-10);
    }

    TEST_CASE_FIXTURE(Fixture, "allowed coupling matches gamma G times the z matrix element and is linear in G") {
        const std::complex<double> g(3e-7, 1e-7);
        const double gamma = 2.2e10;
        const SpatialWeight z = [](const Vec3& p) { return std::complex<double>(p.z, 0.0); };
        const double element = std::abs(overlapIntegral(dipole, s000, z, cell));
        const std::complex<double> j = couplingJ(g, gamma, s000, dipole, cell);
        CHECK(element > 0.0);
        CHECK(std::abs(j) == doctest::Approx(gamma * std::abs(g) * element).epsilon(1e-12));
        CHECK(std::abs(couplingJ(3.0 * g, gamma, s000, dipole, cell) - 3.0 * j) < 1e-12 * std::abs(j));
        CHECK(std::abs(couplingJ(g, gamma, dipole, s000, cell)) == doctest::Approx(std::abs(j)).epsilon(1e-12));
    }

    TEST_CASE_FIXTURE(Fixture, "a real gradient gives an imaginary coupling") {
        const std::complex<double> j = couplingJ({1e-7, 0.0}, 2.2e10, s000, dipole, cell);
        CHECK(std::abs(j.real()) < 1e-12 * std::abs(j));
    }
}

TEST_SUITE("gradient estimate") {
    const std::vector<double> positions{-4e-3, -3e-3, -2e-3, -1e-3, 0.0, 1e-3, 2e-3, 3e-3, 4e-3};

    TEST_CASE("constant profiles are flat") {
        const std::vector<double> f(positions.size(), 6283.0);
        const std::vector<double> w(positions.size(), 12.0);
        const GradientEstimate est = estimateGFromImaging(positions, f, w, 2.2e10);
        CHECK(est.flat);
        CHECK(est.gradient == std::complex<double>(0.0, 0.0));
    }

    TEST_CASE("exact frequency gradient is recovered") {
        const double gamma = 2.2e10;
        const double slope = 3.7e4;  // rad/s/m
        std::vector<double> f, w(positions.size(), 12.0);
        for (double z : positions) {
            f.push_back(6283.0 + slope * z);
        }
        const GradientEstimate est = estimateGFromImaging(positions, f, w, gamma);
        CHECK_FALSE(est.flat);
        CHECK(std::abs(est.gradient.real() - slope / gamma) < 1e-12 * slope / gamma);
        CHECK(std::abs(est.gradient.imag()) < 1e-12 * slope / gamma);
    }

    TEST_CASE("exact linewidth gradient lands in the other quadrature") {
        const double gamma = 2.2e10;
        std::vector<double> f(positions.size(), 1.0), w;
        for (double z : positions) {
            w.push_back(10.0 + 500.0 * z);
        }
        const GradientEstimate est = estimateGFromImaging(positions, f, w, gamma);
        CHECK(est.gradient.imag() == doctest::Approx(-500.0 / gamma).epsilon(1e-12));
        CHECK(std::abs(est.gradient.real()) < 1e-20);
    }

    TEST_CASE("one percent noise keeps the slope within 5 percent") {
        const double slope = 1e4;
        std::vector<double> grid;
        for (int i = -10; i <= 10; ++i) {
            grid.push_back(0.4e-3 * i);
        }
        const double excursion = slope * (grid.back() - grid.front());
        std::mt19937_64 rng(7);
        std::normal_distribution<double> noise(0.0, 0.01 * excursion);
        for (int draw = 0; draw < 100; ++draw) {
            std::vector<double> f, w(grid.size(), 5.0);
            for (double z : grid) {
                f.push_back(slope * z + noise(rng));
            }
            const GradientEstimate est = estimateGFromImaging(grid, f, w, 1.0);
            CHECK(std::abs(est.frequencySlope / slope - 1.0) < 0.05);
        }
    }

    TEST_CASE("too few positions") {
        const std::vector<double> two{0.0, 1.0};
        CHECK_THROWS_AS(estimateGFromImaging(two, two, two, 1.0), DomainError);
    }
}

TEST_SUITE("convergence gate") {
    TEST_CASE_FIXTURE(Fixture, "beam integrals change by less than 1e-6 when the order is doubled") {
        const BeamQuadrature base;
        const BeamQuadrature fine = base.doubled();
        for (double waist : {1e-3, 3e-3, 8e-3}) {
            const BeamSpec beam = pumpBeam(waist, 40.0);
            for (const Mode* m : {&s000, &s100, &dipole}) {
                CHECK(relative(effectiveIntensity(beam, *m, cell, base), effectiveIntensity(beam, *m, cell, fine)) < 1e-6);
                CHECK(relative(pumpProjection(beam, *m, cell, base).real(),
                               pumpProjection(beam, *m, cell, fine).real()) < 1e-6);
            }
        }
        SlitSpec slit;
        slit.positions = {-5e-3, 0.0, 2e-3};
        const std::vector<double> a = slitImage(s000, probeBeam(2e-3), slit, cell, base);
        const std::vector<double> b = slitImage(s000, probeBeam(2e-3), slit, cell, fine);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(relative(a[i], b[i]) < 1e-6);
        }
    }

    TEST_CASE("box cell integrals converge as well") {
        CellSpec cell;
        cell.geometry = Geometry::box;
        const Mode b111 = makeBoxMode(cell.box, 1, 1, 1, kRates);
        const BeamSpec beam = pumpBeam(1e-3, 100.0);
        CHECK(relative(effectiveIntensity(beam, b111, cell), effectiveIntensity(beam, b111, cell, BeamQuadrature{}.doubled())) <
              1e-6);
    }
}

TEST_CASE("imaging CSV") {
    std::ostringstream out;
    writeImagingCsv(out, {{1e-3, "s000", 0.5, 1000.0, 2.0}});
    CHECK(out.str() == "z0_mm,mode_id,amplitude,frequency_Hz,linewidth_Hz\n1,s000,0.5,1000,2\n");
}
