#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "torsionfield/linalg.hpp"

namespace torsionfield {

// Partial derivatives of the metric: d[k](i,j) = d g_ij / d x^k.
struct MetricPartials {
    Mat2 d[2];
};

struct AxisSpec {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
};

// Rectangular coordinate box, optionally periodic per axis. Periodic axes
// always contain (coordinates wrap); open axes are checked against [lo, hi].
struct ChartDomain {
    AxisSpec axis[2];

    bool contains(const Vec2& p) const {
        for (int i = 0; i < 2; ++i) {
            if (axis[i].periodic) continue;
            if (!(p[i] >= axis[i].lo && p[i] <= axis[i].hi)) return false;
        }
        return std::isfinite(p[0]) && std::isfinite(p[1]);
    }

    // Wrap periodic coordinates into [lo, hi).
    Vec2 wrap(const Vec2& p) const {
        Vec2 q = p;
        for (int i = 0; i < 2; ++i) {
            if (!axis[i].periodic) continue;
            const double len = axis[i].hi - axis[i].lo;
            q[i] = std::fmod(q[i] - axis[i].lo, len);
            if (q[i] < 0.0) q[i] += len;
            q[i] += axis[i].lo;
        }
        return q;
    }

    double span(int i) const { return axis[i].hi - axis[i].lo; }
};

// A 2-D Riemannian manifold presented in a single coordinate chart. The
// metric and its first partials are analytic callables; second-level
// derivatives are obtained by finite differences where needed.
struct ManifoldModel {
    std::string name;
    int dim = 2;
    ChartDomain domain;
    std::function<Mat2(const Vec2&)> metric;
    std::function<MetricPartials(const Vec2&)> metric_partials;

    Mat2 metric_at(const Vec2& p) const { return metric(p); }

    void require_in_domain(const Vec2& p) const {
        if (!domain.contains(p))
            throw std::domain_error("point (" + std::to_string(p[0]) + ", " +
                                    std::to_string(p[1]) + ") outside chart domain of " + name);
    }

    // g(u, w) at p.
    double inner(const Vec2& p, const Vec2& u, const Vec2& w) const {
        const Mat2 g = metric(p);
        double s = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s += g(i, j) * u[i] * w[j];
        return s;
    }

    // Unsigned angle between tangent vectors under g. atan2 of the metric
    // area spanned against the inner product, which stays accurate for
    // nearly parallel vectors where acos loses half the significant digits.
    double angle_between(const Vec2& p, const Vec2& u, const Vec2& w) const {
        const Mat2 g = metric(p);
        const double area = std::sqrt(g.det()) * std::abs(u[0] * w[1] - u[1] * w[0]);
        double s = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s += g(i, j) * u[i] * w[j];
        return std::atan2(area, s);
    }
};

using ManifoldPtr = std::shared_ptr<const ManifoldModel>;

// Flat torus: chart [0, 2pi)^2, both axes periodic, g = identity.
inline ManifoldPtr make_flat_torus() {
    auto m = std::make_shared<ManifoldModel>();
    m->name = "flat-torus";
    m->domain.axis[0] = {0.0, 2.0 * std::numbers::pi, true};
    m->domain.axis[1] = {0.0, 2.0 * std::numbers::pi, true};
    m->metric = [](const Vec2&) { return Mat2::identity(); };
    m->metric_partials = [](const Vec2&) { return MetricPartials{}; };
    return m;
}

// Sphere of radius R in polar coordinates (theta, phi) with
// g = diag(R^2, R^2 sin^2 theta). The chart keeps away from the poles.
inline ManifoldPtr make_sphere(double radius = 1.0) {
    if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
    auto m = std::make_shared<ManifoldModel>();
    m->name = "sphere";
    m->domain.axis[0] = {0.15, std::numbers::pi - 0.15, false};
    m->domain.axis[1] = {0.0, 2.0 * std::numbers::pi, true};
    const double r2 = radius * radius;
    m->metric = [r2](const Vec2& p) {
        const double s = std::sin(p[0]);
        return Mat2{r2, 0.0, 0.0, r2 * s * s};
    };
    m->metric_partials = [r2](const Vec2& p) {
        MetricPartials dg;
        dg.d[0](1, 1) = 2.0 * r2 * std::sin(p[0]) * std::cos(p[0]);
        return dg;
    };
    return m;
}

// Hyperbolic half-plane with g = diag(1/y^2, 1/y^2) on a bounded box,
// y restricted to [0.1, 10].
inline ManifoldPtr make_half_plane() {
    auto m = std::make_shared<ManifoldModel>();
    m->name = "half-plane";
    m->domain.axis[0] = {-10.0, 10.0, false};
    m->domain.axis[1] = {0.1, 10.0, false};
    m->metric = [](const Vec2& p) {
        const double w = 1.0 / (p[1] * p[1]);
        return Mat2{w, 0.0, 0.0, w};
    };
    m->metric_partials = [](const Vec2& p) {
        MetricPartials dg;
        const double w = -2.0 / (p[1] * p[1] * p[1]);
        dg.d[1](0, 0) = w;
        dg.d[1](1, 1) = w;
        return dg;
    };
    return m;
}

// Factory used by the CLI and the verification suite.
inline ManifoldPtr make_manifold(const std::string& name, double radius = 1.0) {
    if (name == "flat-torus") return make_flat_torus();
    if (name == "sphere") return make_sphere(radius);
    if (name == "half-plane") return make_half_plane();
    throw std::invalid_argument("unknown manifold name: " + name);
}

}  // namespace torsionfield
