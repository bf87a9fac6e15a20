#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "torsionfield/linalg.hpp"

namespace torsionfield {

// Smooth scalar field with analytic derivatives.
// gradient(p)[i] = d f / d x^i, hessian(p)(i,j) = d^2 f / d x^i d x^j.
struct ScalarFieldExpr {
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> gradient;
    std::function<Mat2(const Vec2&)> hessian;

    static ScalarFieldExpr constant(double c) {
        return {[c](const Vec2&) { return c; },
                [](const Vec2&) { return Vec2{}; },
                [](const Vec2&) { return Mat2{}; }};
    }
};

// Smooth vector field given by component functions with analytic partials.
// components(p)[i] = X^i, jacobian(p)(i,j) = d X^i / d x^j.
// second_partials is optional; hess[k](i,j) = d^2 X^k / d x^i d x^j. It is
// required only by nested-derivative operations (stochastic curvature on
// general fields); those fall back to finite differences of the jacobian
// when it is absent.
struct VectorFieldExpr {
    std::function<Vec2(const Vec2&)> components;
    std::function<Mat2(const Vec2&)> jacobian;
    std::function<std::array<Mat2, 2>(const Vec2&)> second_partials;

    bool has_second_partials() const { return static_cast<bool>(second_partials); }

    std::array<Mat2, 2> second_partials_at(const Vec2& p, double h = 1e-5) const {
        if (second_partials) return second_partials(p);
        // central differences of the analytic jacobian
        std::array<Mat2, 2> hess;
        for (int i = 0; i < 2; ++i) {
            Vec2 pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            const Mat2 jp = jacobian(pp), jm = jacobian(pm);
            for (int k = 0; k < 2; ++k)
                for (int j = 0; j < 2; ++j) hess[k](i, j) = (jp(k, j) - jm(k, j)) / (2.0 * h);
        }
        return hess;
    }
};

// Coordinate field d/dx^axis.
inline VectorFieldExpr coordinate_field(int axis) {
    Vec2 e;
    e[axis] = 1.0;
    return {[e](const Vec2&) { return e; },
            [](const Vec2&) { return Mat2{}; },
            [](const Vec2&) { return std::array<Mat2, 2>{}; }};
}

inline VectorFieldExpr constant_field(const Vec2& value) {
    return {[value](const Vec2&) { return value; },
            [](const Vec2&) { return Mat2{}; },
            [](const Vec2&) { return std::array<Mat2, 2>{}; }};
}

// X + Y and f*X + Y combinations used by the identity checks.
inline VectorFieldExpr field_linear_combination(const ScalarFieldExpr& f, const VectorFieldExpr& x,
                                                const VectorFieldExpr& y) {
    VectorFieldExpr r;
    r.components = [f, x, y](const Vec2& p) { return x.components(p) * f.value(p) + y.components(p); };
    r.jacobian = [f, x, y](const Vec2& p) {
        const double fv = f.value(p);
        const Vec2 df = f.gradient(p);
        const Vec2 xv = x.components(p);
        Mat2 jx = x.jacobian(p), jy = y.jacobian(p), out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out(i, j) = fv * jx(i, j) + df[j] * xv[i] + jy(i, j);
        return out;
    };
    return r;
}

struct CurveSample {
    double t = 0.0;
    Vec2 pos;
    Vec2 vel;
};

// Parametrized curve with velocity. Analytic curves carry closures only;
// integrator output also carries the discrete trajectory.
struct CurvePath {
    std::function<Vec2(double)> position;
    std::function<Vec2(double)> velocity;
    double t0 = 0.0;
    double t1 = 0.0;
    std::vector<CurveSample> samples;

    bool exited_chart = false;      // trajectory truncated at the chart edge
    bool aborted_degenerate = false;  // noise field dipped below the positivity floor

    double duration() const { return t1 - t0; }
    bool from_integrator() const { return !samples.empty(); }
};

// Cubic Hermite interpolation through (pos, vel) samples on a uniform-ish
// grid. Good to O(h^4) in position; precision-critical consumers should use
// the samples directly.
inline CurvePath curve_from_samples(std::vector<CurveSample> samples) {
    if (samples.size() < 2) throw std::invalid_argument("curve_from_samples: need at least 2 samples");
    auto data = std::make_shared<std::vector<CurveSample>>(std::move(samples));
    const double t0 = data->front().t;
    const double t1 = data->back().t;

    auto locate = [data](double t) -> std::size_t {
        const auto& s = *data;
        std::size_t lo = 0, hi = s.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (s[mid].t <= t)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    };

    CurvePath path;
    path.t0 = t0;
    path.t1 = t1;
    path.position = [data, locate](double t) {
        const auto& s = *data;
        const std::size_t k = locate(t);
        const double h = s[k + 1].t - s[k].t;
        const double u = (t - s[k].t) / h;
        const double u2 = u * u, u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
        const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
        Vec2 r;
        for (int i = 0; i < 2; ++i)
            r[i] = h00 * s[k].pos[i] + h10 * h * s[k].vel[i] + h01 * s[k + 1].pos[i] +
                   h11 * h * s[k + 1].vel[i];
        return r;
    };
    path.velocity = [data, locate](double t) {
        const auto& s = *data;
        const std::size_t k = locate(t);
        const double h = s[k + 1].t - s[k].t;
        const double u = (t - s[k].t) / h;
        const double u2 = u * u;
        const double d00 = (6 * u2 - 6 * u) / h, d10 = 3 * u2 - 4 * u + 1;
        const double d01 = (-6 * u2 + 6 * u) / h, d11 = 3 * u2 - 2 * u;
        Vec2 r;
        for (int i = 0; i < 2; ++i)
            r[i] = d00 * s[k].pos[i] + d10 * s[k].vel[i] + d01 * s[k + 1].pos[i] +
                   d11 * s[k + 1].vel[i];
        return r;
    };
    path.samples = *data;
    return path;
}

// Analytic curve helpers.

inline CurvePath line_curve(const Vec2& p0, const Vec2& v, double t0, double t1) {
    CurvePath c;
    c.t0 = t0;
    c.t1 = t1;
    c.position = [p0, v](double t) { return p0 + v * t; };
    c.velocity = [v](double) { return v; };
    return c;
}

// Latitude circle theta = theta0 on the sphere chart, phi = omega * t.
inline CurvePath sphere_latitude_curve(double theta0, double omega = 1.0, double t0 = 0.0,
                                       double t1 = 2.0 * std::numbers::pi) {
    CurvePath c;
    c.t0 = t0;
    c.t1 = t1;
    c.position = [theta0, omega](double t) { return Vec2{theta0, omega * t}; };
    c.velocity = [omega](double) { return Vec2{0.0, omega}; };
    return c;
}

}  // namespace torsionfield
