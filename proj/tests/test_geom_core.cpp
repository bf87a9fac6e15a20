#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "torsionfield/connection.hpp"
#include "torsionfield/curvature.hpp"
#include "torsionfield/fields.hpp"
#include "torsionfield/geodesic.hpp"
#include "torsionfield/manifold.hpp"
#include "torsionfield/rng.hpp"

using namespace torsionfield;

namespace {

constexpr double kPi = std::numbers::pi;

// Central-difference check of an analytic derivative callable.
template <class F, class G>
double max_fd_error_scalar(F&& value, G&& grad, const Vec2& p, double h = 1e-5) {
    double worst = 0.0;
    const Vec2 g = grad(p);
    for (int i = 0; i < 2; ++i) {
        Vec2 pp = p, pm = p;
        pp[i] += h;
        pm[i] -= h;
        worst = std::max(worst, std::abs((value(pp) - value(pm)) / (2.0 * h) - g[i]));
    }
    return worst;
}

Vec2 random_point(const ManifoldModel& m, Rng& rng, double margin = 0.05) {
    Vec2 p;
    for (int i = 0; i < 2; ++i) {
        const auto& ax = m.domain.axis[i];
        const double pad = ax.periodic ? 0.0 : margin * (ax.hi - ax.lo);
        p[i] = ax.lo + pad + (ax.hi - ax.lo - 2 * pad) * rng.uniform01();
    }
    return p;
}

}  // namespace

TEST_CASE("built-in metrics are positive definite and match their partials") {
    Rng rng(2024);
    for (const auto& m : {make_flat_torus(), make_sphere(), make_half_plane()}) {
        for (int trial = 0; trial < 50; ++trial) {
            const Vec2 p = random_point(*m, rng);
            const Mat2 g = m->metric(p);
            REQUIRE(sym_eigenvalues(g)[0] > 0.0);
            REQUIRE(std::abs(g(0, 1) - g(1, 0)) == 0.0);

            // analytic partials vs central differences of the metric
            const MetricPartials dg = m->metric_partials(p);
            const double h = 1e-5;
            for (int k = 0; k < 2; ++k) {
                Vec2 pp = p, pm = p;
                pp[k] += h;
                pm[k] -= h;
                const Mat2 gp = m->metric(pp), gm = m->metric(pm);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        const double fd = (gp(i, j) - gm(i, j)) / (2.0 * h);
                        REQUIRE(std::abs(fd - dg.d[k](i, j)) < 1e-8);
                    }
            }
        }
    }
}

TEST_CASE("christoffel symbols: flat torus vanishes, sphere matches closed form") {
    const auto torus = make_flat_torus();
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Christoffel gamma = christoffel_at(*torus, random_point(*torus, rng));
        REQUIRE(gamma.max_abs() == 0.0);
    }

    const auto sphere = make_sphere();

    // equator: both nonzero symbols vanish
    const Christoffel ge = christoffel_at(*sphere, {kPi / 2.0, 0.0});
    REQUIRE(std::abs(ge(0, 1, 1)) < 1e-15);
    REQUIRE(std::abs(ge(1, 0, 1)) < 1e-15);

    // theta = pi/4: Gamma^theta_{phi phi} = -sin cos = -1/2, Gamma^phi_{theta phi} = cot = 1
    const Christoffel g4 = christoffel_at(*sphere, {kPi / 4.0, 1.0});
    REQUIRE_THAT(g4(0, 1, 1), Catch::Matchers::WithinAbs(-0.5, 1e-12));
    REQUIRE_THAT(g4(1, 0, 1), Catch::Matchers::WithinAbs(1.0, 1e-12));

    // symmetric in the lower pair, exactly
    for (const auto& m : {make_sphere(), make_half_plane()}) {
        for (int trial = 0; trial < 50; ++trial) {
            const Christoffel gamma = christoffel_at(*m, random_point(*m, rng));
            for (int k = 0; k < 2; ++k)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) REQUIRE(gamma(k, i, j) == gamma(k, j, i));
        }
    }
}

TEST_CASE("christoffel domain and singularity errors") {
    const auto sphere = make_sphere();
    REQUIRE_THROWS_AS(christoffel_at(*sphere, {0.01, 0.0}), std::domain_error);

    ManifoldModel degenerate = *make_flat_torus();
    degenerate.metric = [](const Vec2&) { return Mat2{1.0, 1.0, 1.0, 1.0}; };
    REQUIRE_THROWS_AS(christoffel_at(degenerate, {1.0, 1.0}), std::runtime_error);
}

TEST_CASE("curvature: flat torus zero, sphere K=+1, half-plane K=-1") {
    Rng rng(11);
    const auto torus = make_flat_torus();
    for (int trial = 0; trial < 10; ++trial) {
        const CurvaturePair r = curvature_at(*torus, random_point(*torus, rng));
        REQUIRE(r.up.max_abs() < 1e-12);
    }

    const auto sphere = make_sphere();
    REQUIRE_THAT(sectional_curvature(*sphere, {kPi / 3.0, 0.5}, {1, 0}, {0, 1}),
                 Catch::Matchers::WithinAbs(1.0, 1e-9));
    const auto halfplane = make_half_plane();
    REQUIRE_THAT(sectional_curvature(*halfplane, {0.0, 2.0}, {1, 0}, {0, 1}),
                 Catch::Matchers::WithinAbs(-1.0, 1e-9));

    // radius scaling: K = 1/R^2
    const auto sphere2 = make_sphere(2.0);
    REQUIRE_THAT(sectional_curvature(*sphere2, {1.0, 1.0}, {1, 0}, {0, 1}),
                 Catch::Matchers::WithinAbs(0.25, 1e-10));
}

TEST_CASE("curvature symmetries and first Bianchi identity hold at sampled points") {
    Rng rng(13);
    for (const auto& m : {make_sphere(), make_half_plane()}) {
        for (int trial = 0; trial < 100; ++trial) {
            const Vec2 p = random_point(*m, rng);
            const CurvaturePair r = curvature_at(*m, p);
            const CurvatureSymmetryResiduals res = curvature_symmetry_residuals(r.low);
            REQUIRE(res.max() < 1e-8);
        }
    }
}

TEST_CASE("ricci tensor and scalar curvature on the built-ins") {
    const auto sphere = make_sphere();
    const Vec2 p{kPi / 3.0, 0.7};
    const RicciScalar rs = ricci_scalar_at(*sphere, p);
    const Mat2 g = sphere->metric(p);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) REQUIRE_THAT(rs.ricci(i, j), Catch::Matchers::WithinAbs(g(i, j), 1e-8));
    REQUIRE_THAT(rs.scalar, Catch::Matchers::WithinAbs(2.0, 1e-8));

    const auto halfplane = make_half_plane();
    REQUIRE_THAT(ricci_scalar_at(*halfplane, {1.0, 3.0}).scalar, Catch::Matchers::WithinAbs(-2.0, 1e-8));

    const auto torus = make_flat_torus();
    REQUIRE(ricci_scalar_at(*torus, {1.0, 2.0}).ricci.max_abs() < 1e-12);
}

TEST_CASE("covariant derivative: bilinearity, frozen sphere value, Leibniz rule") {
    const auto sphere = make_sphere();
    const Vec2 p{kPi / 4.0, 0.0};

    // D_{d/dphi} d/dphi at theta=pi/4: components (Gamma^k_{22}) = (-1/2, 0)
    const VectorFieldExpr dphi = coordinate_field(1);
    const Vec2 d = covariant_derivative(*sphere, dphi, dphi, p);
    REQUIRE_THAT(d[0], Catch::Matchers::WithinAbs(-0.5, 1e-12));
    REQUIRE_THAT(d[1], Catch::Matchers::WithinAbs(0.0, 1e-12));

    // zero field in, zero out
    const VectorFieldExpr zero = constant_field({0.0, 0.0});
    REQUIRE(covariant_derivative(*sphere, zero, dphi, p).norm() == 0.0);
    REQUIRE(covariant_derivative(*sphere, dphi, zero, p).norm() == 0.0);

    // bilinearity over reals
    VectorFieldExpr x{[](const Vec2& q) { return Vec2{std::sin(q[1]), std::cos(q[0])}; },
                      [](const Vec2& q) {
                          return Mat2{0.0, std::cos(q[1]), -std::sin(q[0]), 0.0};
                      },
                      nullptr};
    VectorFieldExpr y{[](const Vec2& q) { return Vec2{q[1] * 0.1, 0.2 + 0.05 * q[0]}; },
                      [](const Vec2&) {
                          return Mat2{0.0, 0.1, 0.05, 0.0};
                      },
                      nullptr};
    const double a = -1.7;
    VectorFieldExpr ax_plus_y{
        [=](const Vec2& q) { return x.components(q) * a + y.components(q); },
        [=](const Vec2& q) { return x.jacobian(q) * a + y.jacobian(q); }, nullptr};
    const Vec2 lhs = covariant_derivative(*sphere, dphi, ax_plus_y, p);
    const Vec2 rhs =
        covariant_derivative(*sphere, dphi, x, p) * a + covariant_derivative(*sphere, dphi, y, p);
    REQUIRE((lhs - rhs).norm() < 1e-12);

    // Leibniz: D_X(fY) = X(f) Y + f D_X Y
    ScalarFieldExpr f{[](const Vec2& q) { return 1.0 + 0.3 * std::sin(q[0]) * std::cos(q[1]); },
                      [](const Vec2& q) {
                          return Vec2{0.3 * std::cos(q[0]) * std::cos(q[1]),
                                      -0.3 * std::sin(q[0]) * std::sin(q[1])};
                      },
                      nullptr};
    VectorFieldExpr fy{[=](const Vec2& q) { return y.components(q) * f.value(q); },
                       [=](const Vec2& q) {
                           const Vec2 yv = y.components(q);
                           const Vec2 df = f.gradient(q);
                           Mat2 out = y.jacobian(q) * f.value(q);
                           for (int i = 0; i < 2; ++i)
                               for (int j = 0; j < 2; ++j) out(i, j) += df[j] * yv[i];
                           return out;
                       },
                       nullptr};
    const Vec2 left = covariant_derivative(*sphere, x, fy, p);
    const Vec2 right =
        y.components(p) * field_derivative(x, f, p) + covariant_derivative(*sphere, x, y, p) * f.value(p);
    REQUIRE((left - right).norm() < 1e-12);
}

TEST_CASE("metric compatibility of the Levi-Civita connection at sampled points") {
    Rng rng(17);
    for (const auto& m : {make_sphere(), make_half_plane()}) {
        VectorFieldExpr x{[](const Vec2& q) { return Vec2{0.4 + 0.1 * std::sin(q[1]), 0.3}; },
                          [](const Vec2& q) {
                              return Mat2{0.0, 0.1 * std::cos(q[1]), 0.0, 0.0};
                          },
                          nullptr};
        VectorFieldExpr y{[](const Vec2& q) { return Vec2{std::cos(q[0]), 0.2 * q[0]}; },
                          [](const Vec2& q) {
                              return Mat2{-std::sin(q[0]), 0.0, 0.2, 0.0};
                          },
                          nullptr};
        VectorFieldExpr z{[](const Vec2& q) { return Vec2{0.1, 0.5 + 0.2 * std::cos(q[1])}; },
                          [](const Vec2& q) {
                              return Mat2{0.0, 0.0, 0.0, -0.2 * std::sin(q[1])};
                          },
                          nullptr};
        for (int trial = 0; trial < 40; ++trial) {
            const Vec2 p = random_point(*m, rng);
            const double xyz = derivative_of_inner(*m, x, y, z, p);
            const double lhs = m->inner(p, covariant_derivative(*m, x, y, p), z.components(p)) +
                               m->inner(p, y.components(p), covariant_derivative(*m, x, z, p));
            REQUIRE(std::abs(xyz - lhs) < 1e-6);
        }
    }
}

TEST_CASE("lie bracket: antisymmetry, coordinate fields, frozen torus value") {
    const auto torus = make_flat_torus();
    const Vec2 p{1.3, 2.1};

    // [d1, d2] = 0
    REQUIRE(lie_bracket(coordinate_field(0), coordinate_field(1), p).norm() == 0.0);

    // X = (y, 0), Y = (0, 1): [X,Y] = (-1, 0)
    VectorFieldExpr x{[](const Vec2& q) { return Vec2{q[1], 0.0}; },
                      [](const Vec2&) {
                          return Mat2{0.0, 1.0, 0.0, 0.0};
                      },
                      nullptr};
    const VectorFieldExpr y = constant_field({0.0, 1.0});
    const Vec2 b = lie_bracket(x, y, p);
    REQUIRE_THAT(b[0], Catch::Matchers::WithinAbs(-1.0, 1e-15));
    REQUIRE_THAT(b[1], Catch::Matchers::WithinAbs(0.0, 1e-15));

    // [X,X] = 0 and antisymmetry
    REQUIRE(lie_bracket(x, x, p).norm() == 0.0);
    const Vec2 ba = lie_bracket(y, x, p);
    REQUIRE((b + ba).norm() == 0.0);

    // torsion-free: [X,Y] = D_X Y - D_Y X on the sphere
    const auto sphere = make_sphere();
    const Vec2 q{1.1, 0.4};
    VectorFieldExpr u{[](const Vec2& r) { return Vec2{std::sin(r[1]), r[0]}; },
                      [](const Vec2& r) {
                          return Mat2{0.0, std::cos(r[1]), 1.0, 0.0};
                      },
                      nullptr};
    VectorFieldExpr w{[](const Vec2& r) { return Vec2{r[1] * r[1], std::cos(r[0])}; },
                      [](const Vec2& r) {
                          return Mat2{0.0, 2.0 * r[1], -std::sin(r[0]), 0.0};
                      },
                      nullptr};
    const Vec2 torsion = covariant_derivative(*sphere, u, w, q) - covariant_derivative(*sphere, w, u, q) -
                         lie_bracket(u, w, q);
    REQUIRE(torsion.norm() < 1e-12);
}

TEST_CASE("standard geodesics: straight lines, equator, unit-speed arc length") {
    const auto torus = make_flat_torus();
    const CurvePath line = geodesic_standard(*torus, {0.0, 0.0}, {1.0, 0.0}, 1.0, 1e-3);
    REQUIRE_FALSE(line.exited_chart);
    for (const auto& s : line.samples) {
        REQUIRE_THAT(s.pos[0], Catch::Matchers::WithinAbs(s.t, 1e-12));
        REQUIRE(std::abs(s.pos[1]) < 1e-14);
    }

    const auto sphere = make_sphere();
    const CurvePath equator = geodesic_standard(*sphere, {kPi / 2.0, 0.0}, {0.0, 1.0}, kPi, 1e-3);
    for (const auto& s : equator.samples) REQUIRE(std::abs(s.pos[0] - kPi / 2.0) < 1e-10);

    // generic start, unit speed: arc length equals elapsed time
    const Vec2 p0{kPi / 3.0, 0.3};
    Vec2 v0{0.6, 0.9};
    const double speed = std::sqrt(sphere->inner(p0, v0, v0));
    v0 = v0 / speed;
    const double duration = 1.0;
    const CurvePath path = geodesic_standard(*sphere, p0, v0, duration, 1e-4);
    double arc = 0.0;
    for (std::size_t i = 1; i < path.samples.size(); ++i) {
        const auto& a = path.samples[i - 1];
        const auto& b = path.samples[i];
        const Vec2 mid_pos = (a.pos + b.pos) / 2.0;
        const Vec2 mid_vel = (a.vel + b.vel) / 2.0;
        arc += std::sqrt(sphere->inner(mid_pos, mid_vel, mid_vel)) * (b.t - a.t);
    }
    REQUIRE_THAT(arc, Catch::Matchers::WithinAbs(duration, 1e-8));
}

TEST_CASE("geodesic speed drift shrinks 16x when the step is halved") {
    const auto sphere = make_sphere();
    const Vec2 p0{kPi / 3.0, 0.1};
    const Vec2 v0{0.4, 0.8};

    auto drift = [&](double h) {
        const CurvePath path = geodesic_standard(*sphere, p0, v0, 2.0, h);
        const auto speeds = speed_squared_along(*sphere, path);
        return std::abs(speeds.back() - speeds.front());
    };
    const double d1 = drift(0.02);
    const double d2 = drift(0.01);
    const double ratio = d1 / d2;
    REQUIRE(ratio > 11.0);  // order 4: ratio ~ 16
    REQUIRE(ratio < 22.0);
}

TEST_CASE("geodesics that leave the chart are truncated and flagged") {
    const auto sphere = make_sphere();
    // shoot toward the pole
    const CurvePath path = geodesic_standard(*sphere, {0.5, 0.0}, {-1.0, 0.0}, 2.0, 1e-3);
    REQUIRE(path.exited_chart);
    REQUIRE(path.t1 < 2.0);
    for (const auto& s : path.samples) REQUIRE(sphere->domain.contains(s.pos));
}

TEST_CASE("curve samples interpolate consistently") {
    const auto sphere = make_sphere();
    const CurvePath path = geodesic_standard(*sphere, {1.0, 0.0}, {0.2, 0.7}, 1.0, 1e-3);
    // velocity closure vs finite differences of the position closure
    for (double t : {0.1234, 0.5, 0.875}) {
        const Vec2 v = path.velocity(t);
        const double h = 1e-6;
        const Vec2 fd = (path.position(t + h) - path.position(t - h)) / (2.0 * h);
        REQUIRE((v - fd).norm() < 1e-6);
    }
}
