#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "torsionfield/manifold.hpp"
#include "torsionfield/quadrature.hpp"

using namespace torsionfield;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gauss-legendre rule integrates polynomials exactly") {
    // degree-9 polynomial with a 5-point rule
    auto f = [](double x) { return 3.0 * std::pow(x, 9) - 2.0 * std::pow(x, 4) + x - 0.5; };
    const double got = integrate_gl(f, -1.0, 2.0, 5);
    // antiderivative: 0.3 x^10 - 0.4 x^5 + x^2/2 - x/2
    auto F = [](double x) {
        return 0.3 * std::pow(x, 10) - 0.4 * std::pow(x, 5) + 0.5 * x * x - 0.5 * x;
    };
    REQUIRE_THAT(got, Catch::Matchers::WithinAbs(F(2.0) - F(-1.0), 1e-10));
}

TEST_CASE("flat torus area is 4 pi^2") {
    const auto torus = make_flat_torus();
    const QuadratureResult r = integrate_chart(*torus, [](const Vec2&) { return 1.0; });
    REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(4.0 * kPi * kPi, 1e-10));
    REQUIRE(r.refinement_delta < 1e-10);
}

TEST_CASE("sphere band area matches the closed form") {
    const auto sphere = make_sphere();
    // band theta in [0.15, pi - 0.15]: area = 2 pi (cos 0.15 - cos(pi - 0.15)) = 4 pi cos(0.15)
    const QuadratureResult r = integrate_chart(*sphere, [](const Vec2&) { return 1.0; });
    REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(4.0 * kPi * std::cos(0.15), 1e-9));
}

TEST_CASE("full sphere area via explicit bounds") {
    const auto sphere = make_sphere();
    const QuadratureResult r =
        integrate_box(*sphere, [](const Vec2&) { return 1.0; }, 0.0, kPi, 0.0, 2.0 * kPi);
    REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(4.0 * kPi, 1e-9));
}

TEST_CASE("smooth integrand refinement delta shrinks at least 4x under doubling") {
    const auto sphere = make_sphere();
    auto f = [](const Vec2& p) { return std::exp(0.3 * std::sin(p[0])) * (1.0 + 0.5 * std::cos(p[1])); };
    const QuadratureResult coarse = integrate_chart(*sphere, f, {8, 16});
    const QuadratureResult fine = integrate_chart(*sphere, f, {16, 32});
    REQUIRE(fine.refinement_delta * 4.0 <= coarse.refinement_delta + 1e-16);
}

TEST_CASE("half-plane box integral carries the hyperbolic area weight") {
    const auto hp = make_half_plane();
    // integral of 1/y^2 over x in [-10,10], y in [0.1,10]: 20 * (1/0.1 - 1/10) = 198
    const QuadratureResult r = integrate_chart(*hp, [](const Vec2&) { return 1.0; }, {64, 64});
    REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(198.0, 1e-6));
}

TEST_CASE("curve integral uses the metric length element") {
    const auto sphere = make_sphere();
    // latitude circle at theta0: length = 2 pi sin(theta0)
    const double theta0 = kPi / 3.0;
    CurvePath lat;
    lat.t0 = 0.0;
    lat.t1 = 2.0 * kPi;
    lat.position = [theta0](double t) { return Vec2{theta0, t}; };
    lat.velocity = [](double) { return Vec2{0.0, 1.0}; };
    const double len = integrate_curve(*sphere, lat, [](double) { return 1.0; });
    REQUIRE_THAT(len, Catch::Matchers::WithinAbs(2.0 * kPi * std::sin(theta0), 1e-10));
}
