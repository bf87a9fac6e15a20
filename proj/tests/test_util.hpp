#pragma once

#include <cmath>

#include "torsionfield/fields.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"
#include "torsionfield/rng.hpp"

namespace tftest {

using namespace torsionfield;

inline Vec2 random_point(const ManifoldModel& m, Rng& rng, double margin = 0.08) {
    Vec2 p;
    for (int i = 0; i < 2; ++i) {
        const auto& ax = m.domain.axis[i];
        const double pad = ax.periodic ? 0.0 : margin * (ax.hi - ax.lo);
        p[i] = ax.lo + pad + (ax.hi - ax.lo - 2 * pad) * rng.uniform01();
    }
    return p;
}

// Smooth test field with analytic first and second partials:
//   X^k = c0 + c1 sin(a x0 + u) cos(b x1 + w), small integer frequencies.
inline VectorFieldExpr random_trig_field(Rng& rng, double amplitude = 0.6) {
    struct Term {
        double c0, c1, a, b, u, w;
    };
    Term t[2];
    for (auto& term : t) {
        term.c0 = amplitude * (2.0 * rng.uniform01() - 1.0);
        term.c1 = amplitude * (2.0 * rng.uniform01() - 1.0);
        term.a = 1.0 + std::floor(2.0 * rng.uniform01());
        term.b = 1.0 + std::floor(2.0 * rng.uniform01());
        term.u = 6.28 * rng.uniform01();
        term.w = 6.28 * rng.uniform01();
    }
    auto sc = [](const Term& q, const Vec2& p) { return std::sin(q.a * p[0] + q.u) * std::cos(q.b * p[1] + q.w); };
    VectorFieldExpr f;
    f.components = [t, sc](const Vec2& p) {
        return Vec2{t[0].c0 + t[0].c1 * sc(t[0], p), t[1].c0 + t[1].c1 * sc(t[1], p)};
    };
    f.jacobian = [t](const Vec2& p) {
        Mat2 j;
        for (int k = 0; k < 2; ++k) {
            const auto& q = t[k];
            j(k, 0) = q.c1 * q.a * std::cos(q.a * p[0] + q.u) * std::cos(q.b * p[1] + q.w);
            j(k, 1) = -q.c1 * q.b * std::sin(q.a * p[0] + q.u) * std::sin(q.b * p[1] + q.w);
        }
        return j;
    };
    f.second_partials = [t](const Vec2& p) {
        std::array<Mat2, 2> h;
        for (int k = 0; k < 2; ++k) {
            const auto& q = t[k];
            const double s = std::sin(q.a * p[0] + q.u), c = std::cos(q.a * p[0] + q.u);
            const double sy = std::sin(q.b * p[1] + q.w), cy = std::cos(q.b * p[1] + q.w);
            h[k](0, 0) = -q.c1 * q.a * q.a * s * cy;
            h[k](0, 1) = -q.c1 * q.a * q.b * c * sy;
            h[k](1, 0) = h[k](0, 1);
            h[k](1, 1) = -q.c1 * q.b * q.b * s * cy;
        }
        return h;
    };
    return f;
}

inline ScalarFieldExpr random_trig_scalar(Rng& rng, double amplitude = 0.5) {
    const double c0 = 1.0 + amplitude * (2.0 * rng.uniform01() - 1.0);
    const double c1 = amplitude * (2.0 * rng.uniform01() - 1.0);
    const double a = 1.0 + std::floor(2.0 * rng.uniform01());
    const double b = 1.0 + std::floor(2.0 * rng.uniform01());
    const double u = 6.28 * rng.uniform01();
    const double w = 6.28 * rng.uniform01();
    ScalarFieldExpr f;
    f.value = [=](const Vec2& p) { return c0 + c1 * std::sin(a * p[0] + u) * std::cos(b * p[1] + w); };
    f.gradient = [=](const Vec2& p) {
        return Vec2{c1 * a * std::cos(a * p[0] + u) * std::cos(b * p[1] + w),
                    -c1 * b * std::sin(a * p[0] + u) * std::sin(b * p[1] + w)};
    };
    f.hessian = [=](const Vec2& p) {
        const double s = std::sin(a * p[0] + u), c = std::cos(a * p[0] + u);
        const double sy = std::sin(b * p[1] + w), cy = std::cos(b * p[1] + w);
        Mat2 h;
        h(0, 0) = -c1 * a * a * s * cy;
        h(0, 1) = -c1 * a * b * c * sy;
        h(1, 0) = h(0, 1);
        h(1, 1) = -c1 * b * b * s * cy;
        return h;
    };
    return f;
}

}  // namespace tftest
