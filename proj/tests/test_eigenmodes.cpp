#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "spindiff/eigenmodes.hpp"
#include "spindiff/errors.hpp"
#include "spindiff/quadrature.hpp"
#include "spindiff/special_functions.hpp"

using namespace spindiff;
constexpr double pi = std::numbers::pi;

namespace {

const ModeRates kRates{4e-5, 1.0, 0.0};

double dipoleRoot() {
    return oracle::bisect([](double x) { return oracle::besselJ(1, x); }, pi, 2.0 * pi);
}

SpatialWeight constantWeight() {
    return [](const Vec3&) { return std::complex<double>(1.0, 0.0); };
}

}  // namespace

TEST_SUITE("special functions") {
    TEST_CASE("j0 at the origin and at pi") {
        CHECK(sphericalBesselJ(0, 0.0) == 1.0);
        CHECK(std::abs(sphericalBesselJ(0, pi)) < 1e-14);
    }

    TEST_CASE("first zero of j1 located by an independent bisection") {
        CHECK(std::abs(sphericalBesselJ(1, dipoleRoot())) < 1e-9);
        CHECK(dipoleRoot() == doctest::Approx(4.493409).epsilon(1e-7));
    }

    TEST_CASE("values and derivatives match the standard library across the series switch") {
        for (int l = 0; l <= kMaxAngularOrder; ++l) {
            for (double x : {1e-6, 0.01, 0.3, 0.999, 1.0, 1.001, 2.5, 7.0, 15.0, 40.0}) {
                CAPTURE(l);
                CAPTURE(x);
                CHECK(std::abs(sphericalBesselJ(l, x) - oracle::besselJ(l, x)) < 1e-13);
                CHECK(std::abs(sphericalBesselJPrime(l, x) - oracle::besselJPrime(l, x)) < 1e-7);
            }
        }
    }

    TEST_CASE("unsupported orders and negative arguments are rejected") {
        CHECK_THROWS_AS(sphericalBesselJ(4, 1.0), DomainError);
        CHECK_THROWS_AS(sphericalBesselJ(-1, 1.0), DomainError);
        CHECK_THROWS_AS(sphericalBesselJPrime(0, -0.5), DomainError);
        CHECK_THROWS_AS(realSphericalHarmonic(1, 2, 0.3, 0.1), DomainError);
    }

    TEST_CASE("real harmonics are orthonormal on the unit sphere") {
        const QuadratureRule mu = gaussLegendre(24);
        const QuadratureRule phi = gaussLegendre(24, 0.0, 2.0 * pi);
        for (int l1 = 0; l1 <= 3; ++l1) {
            for (int m1 = -l1; m1 <= l1; ++m1) {
                for (int l2 = 0; l2 <= 3; ++l2) {
                    for (int m2 = -l2; m2 <= l2; ++m2) {
                        double sum = 0.0;
                        for (std::size_t i = 0; i < mu.size(); ++i) {
                            for (std::size_t j = 0; j < phi.size(); ++j) {
                                const double theta = std::acos(mu.nodes[i]);
                                sum += mu.weights[i] * phi.weights[j] * realSphericalHarmonic(l1, m1, theta, phi.nodes[j]) *
                                       realSphericalHarmonic(l2, m2, theta, phi.nodes[j]);
                            }
                        }
                        const double expected = (l1 == l2 && m1 == m2) ? 1.0 : 0.0;
                        CHECK(std::abs(sum - expected) < 1e-12);
                    }
                }
            }
        }
    }

    TEST_CASE("z-oriented dipole is proportional to cos(theta)") {
        const double scale = std::sqrt(3.0 / (4.0 * pi));
        for (double theta : {0.0, 0.4, 1.2, pi / 2, 2.7}) {
            CHECK(realSphericalHarmonic(1, 0, theta, 0.9) == doctest::Approx(scale * std::cos(theta)));
        }
    }
}

TEST_SUITE("quadrature") {
    TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
        const QuadratureRule rule = gaussLegendre(6, -1.0, 2.0);
        const double exact = (std::pow(2.0, 12) - 1.0) / 12.0;  // x^11 on [-1, 2]
        CHECK(integrate(rule, [](double x) { return std::pow(x, 11); }) == doctest::Approx(exact).epsilon(1e-13));
    }

    TEST_CASE("composite rule honours interior breakpoints only") {
        const std::vector<double> cuts{-5.0, 0.5, 1.0, 9.0};
        const QuadratureRule rule = compositeGaussLegendre(4, 0.0, 2.0, cuts);
        CHECK(rule.size() == 12);
        CHECK(integrate(rule, [](double x) { return std::abs(x - 1.0); }) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(integratePiecewise(gaussLegendre(4), 0.0, 2.0, cuts, [](double x) { return std::abs(x - 1.0); }) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_SUITE("robin wall factor") {
    TEST_CASE("zero mean free path gives zero") {
        CellSpec cell;
        cell.wallParameter = 0.37;
        CHECK(robinWallFactor(cell, 123.0) == 0.0);
    }

    TEST_CASE("closed form at N = 1, lambda = 1, k = 1") {
        CellSpec cell;
        cell.meanFreePath = 1.0;
        const double e = std::exp(-1.0);
        CHECK(robinWallFactor(cell, 1.0) == doctest::Approx(2.0 / 3.0 * (1.0 + e) / (1.0 - e)).epsilon(1e-14));
        CHECK(robinWallFactor(cell, 1.0) == doctest::Approx(1.442636).epsilon(1e-6));
    }

    TEST_CASE("small N tends to 2/3") {
        CellSpec cell;
        cell.meanFreePath = 1.0;
        cell.wallParameter = 1e-3;
        CHECK(robinWallFactor(cell, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    }

    TEST_CASE("non-positive N is a domain error") {
        CellSpec cell;
        cell.wallParameter = 0.0;
        CHECK_THROWS_AS(robinWallFactor(cell, 1.0), DomainError);
    }
}

TEST_SUITE("sphere roots") {
    TEST_CASE("Dirichlet l = 0 roots are n pi / R") {
        CellSpec cell;
        const std::vector<double> k = solveSphereRoots(cell, 0, 3);
        REQUIRE(k.size() == 3);
        for (int n = 0; n < 3; ++n) {
            const double exact = (n + 1) * pi / cell.radius;
            CHECK(std::abs(k[n] - exact) / exact < 1e-10);
        }
        CHECK(k[1] / k[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(k[2] / k[0] == doctest::Approx(3.0).epsilon(1e-12));
    }

    TEST_CASE("Dirichlet l = 1 first root agrees with the bisection oracle") {
        CellSpec cell;
        const double kR = solveSphereRoots(cell, 1, 1)[0] * cell.radius;
        CHECK(std::abs(kR - dipoleRoot()) / dipoleRoot() < 1e-9);
    }

    TEST_CASE("every root of every order matches an independent Robin solve") {
        CellSpec cell;
        cell.radius = 7e-3;
        cell.meanFreePath = 0.8e-3;
        cell.wallParameter = 0.6;
        const double wall = robinWallFactor(cell, 1.0) / cell.radius;
        for (int l = 0; l <= 3; ++l) {
            const std::vector<double> k = solveSphereRoots(cell, l, 4);
            auto g = [&](double x) { return oracle::besselJ(l, x) + wall * x * oracle::besselJPrime(l, x); };
            for (double kn : k) {
                const double x = kn * cell.radius;
                const double ref = oracle::bisect(g, x - 1e-3, x + 1e-3);
                CAPTURE(l);
                CHECK(std::abs(x - ref) < 1e-8 * ref);
                CHECK(std::abs(robinResidual(cell, l, kn)) < 1e-10);
            }
            for (std::size_t i = 1; i < k.size(); ++i) {
                CHECK(k[i] > k[i - 1]);
            }
        }
    }

    TEST_CASE("strong wall factor approaches the Neumann limit") {
        CellSpec cell;
        cell.meanFreePath = 1e3 * cell.radius;
        const std::vector<double> k = solveSphereRoots(cell, 0, 2);
        // The lowest root collapses towards zero; the next one tends to the
        // first nontrivial zero of j0'.
        const double neumann = oracle::bisect([](double x) { return oracle::besselJPrime(0, x); }, pi, 2.0 * pi);
        CHECK(neumann == doctest::Approx(4.493409).epsilon(1e-7));
        CHECK(k[0] * cell.radius < 0.1);
        CHECK(std::abs(k[1] * cell.radius - neumann) < 1e-3);
    }

    TEST_CASE("roots decrease monotonically as the wall factor grows") {
        CellSpec cell;
        double previous[3] = {1e300, 1e300, 1e300};
        for (double path : {0.0, 0.1e-3, 0.5e-3, 1e-3, 3e-3, 10e-3}) {
            cell.meanFreePath = path;
            const std::vector<double> k = solveSphereRoots(cell, 0, 3);
            for (int n = 0; n < 3; ++n) {
                CHECK(k[n] < previous[n]);
                previous[n] = k[n];
            }
        }
    }

    TEST_CASE("invalid requests") {
        CellSpec cell;
        CHECK_THROWS_AS(solveSphereRoots(cell, 0, 0), DomainError);
        CHECK_THROWS_AS(solveSphereRoots(cell, 4, 1), DomainError);
        cell.radius = -1.0;
        CHECK_THROWS(solveSphereRoots(cell, 0, 1));
    }
}

TEST_SUITE("box modes") {
    TEST_CASE("cube fundamental and tie-break") {
        BoxSpec cube{2e-3, 2e-3, 2e-3};
        const std::vector<BoxRoot> roots = solveBoxModes(cube, 4);
        CHECK(roots[0].k == doctest::Approx(pi * std::sqrt(3.0) / 2e-3).epsilon(1e-14));
        CHECK(roots[0].index.label() == "b111");
        CHECK(roots[1].k == doctest::Approx(pi * std::sqrt(6.0) / 2e-3).epsilon(1e-14));
        CHECK(roots[1].index.nx == 2);
        CHECK(roots[1].index.ny == 1);
        CHECK(roots[1].index.nz == 1);
        CHECK(roots[2].index.label() == "b121");
        CHECK(roots[3].index.label() == "b112");
    }

    TEST_CASE("wafer cell fundamental") {
        const std::vector<BoxRoot> roots = solveBoxModes(BoxSpec{}, 1);
        CHECK(roots[0].k * 1e-3 == doctest::Approx(pi * std::sqrt(2.0 / 16.0 + 0.25)).epsilon(1e-12));
        CHECK(roots[0].k * 1e-3 == doctest::Approx(1.923825).epsilon(1e-6));
    }

    TEST_CASE("box modes are orthonormal") {
        CellSpec cell;
        cell.geometry = Geometry::box;
        const Mode a = makeBoxMode(cell.box, 1, 1, 1, kRates);
        const Mode b = makeBoxMode(cell.box, 1, 1, 2, kRates);
        const Mode c = makeBoxMode(cell.box, 2, 1, 1, kRates);
        CHECK(std::abs(overlapIntegral(a, a, constantWeight(), cell) - 1.0) < 1e-8);
        CHECK(std::abs(overlapIntegral(a, b, constantWeight(), cell)) < 1e-8);
        CHECK(std::abs(overlapIntegral(b, c, constantWeight(), cell)) < 1e-8);
    }
}

TEST_SUITE("mode functions") {
    TEST_CASE("fundamental vanishes on a Dirichlet wall") {
        CellSpec cell;
        const Mode s000 = makeSphereMode(cell, 0, 0, 0, kRates);
        CHECK(std::abs(modeValue(s000, cell, {cell.radius, 0.7, 1.1})) < 1e-12 * std::abs(modeValue(s000, cell, {0.0, 0.0, 0.0})));
    }

    TEST_CASE("z-oriented dipole vanishes in the equatorial plane") {
        CellSpec cell;
        cell.meanFreePath = 0.5e-3;
        const Mode dipole = makeSphereMode(cell, 0, 1, 0, kRates);
        CHECK(dipole.index.label() == "s01z");
        const double peak = std::abs(modeValue(dipole, cell, {0.4 * cell.radius, 0.0, 0.3}));
        CHECK(std::abs(modeValue(dipole, cell, {0.4 * cell.radius, pi / 2, 0.3})) < 1e-14 * peak);
    }

    TEST_CASE("points beyond the wall are rejected") {
        CellSpec cell;
        const Mode s000 = makeSphereMode(cell, 0, 0, 0, kRates);
        CHECK_THROWS_AS(modeValue(s000, cell, {1.01 * cell.radius, 0.0, 0.0}), DomainError);
    }

    TEST_CASE("decay rate is D k^2 + Gamma") {
        CellSpec cell;
        const Mode s100 = makeSphereMode(cell, 1, 0, 0, kRates);
        CHECK(s100.decayRate == doctest::Approx(kRates.diffusion * s100.k * s100.k + kRates.decoherence));
        CHECK(s100.decayRate >= kRates.decoherence);
    }

    TEST_CASE("normalisation, orthogonality and parity over a mixed catalogue") {
        CellSpec cell;
        cell.meanFreePath = 1.2e-3;
        const std::vector<Mode> modes = sphereModeCatalog(cell, 2, 2, kRates);
        REQUIRE(modes.size() == 18);
        for (std::size_t a = 0; a < modes.size(); ++a) {
            for (std::size_t b = a; b < modes.size(); ++b) {
                const double overlap = std::abs(overlapIntegral(modes[a], modes[b], constantWeight(), cell));
                CAPTURE(modes[a].index.label());
                CAPTURE(modes[b].index.label());
                CHECK(std::abs(overlap - (a == b ? 1.0 : 0.0)) < 1e-8);
            }
        }
    }

    TEST_CASE("z weight between two l = 0 modes vanishes by parity") {
        CellSpec cell;
        const Mode s000 = makeSphereMode(cell, 0, 0, 0, kRates);
        const Mode s100 = makeSphereMode(cell, 1, 0, 0, kRates);
        const SpatialWeight z = [](const Vec3& p) { return std::complex<double>(p.z, 0.0); };
        CHECK(std::abs(overlapIntegral(s000, s100, z, cell)) < 1e-10);
        const Mode dipole = makeSphereMode(cell, 0, 1, 0, kRates);
        CHECK(std::abs(overlapIntegral(s000, dipole, z, cell)) > 1e-3 * cell.radius);
    }

    TEST_CASE("quadrature orders below the minimum are a configuration error") {
        CellSpec cell;
        const Mode s000 = makeSphereMode(cell, 0, 0, 0, kRates);
        CHECK_THROWS_AS(overlapIntegral(s000, s000, constantWeight(), cell, {3, 32, 32}), ConfigError);
    }

    TEST_CASE("doubling the quadrature order changes the z matrix element by less than 1e-6") {
        CellSpec cell;
        cell.meanFreePath = 1e-3;
        const Mode s000 = makeSphereMode(cell, 0, 0, 0, kRates);
        const Mode dipole = makeSphereMode(cell, 0, 1, 0, kRates);
        const SpatialWeight z = [](const Vec3& p) { return std::complex<double>(p.z, 0.0); };
        const double base = overlapIntegral(s000, dipole, z, cell).real();
        const double fine = overlapIntegral(s000, dipole, z, cell, {128, 64, 64}).real();
        CHECK(std::abs(base - fine) / std::abs(fine) < 1e-6);
    }
}

TEST_CASE("mode catalogue CSV") {
    CellSpec cell;
    std::ostringstream out;
    writeModeCatalogCsv(out, sphereModeCatalog(cell, 1, 1, kRates), cell);
    std::istringstream in(out.str());
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "n,l,p,kR,k,gamma_m,norm");
    CHECK(first.rfind("0,0,0,3.14159265", 0) == 0);
}
