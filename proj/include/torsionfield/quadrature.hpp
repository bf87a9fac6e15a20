#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "torsionfield/fields.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"

namespace torsionfield {

struct GaussLegendreRule {
    std::vector<double> nodes;  // on (-1, 1)
    std::vector<double> weights;
};

// Nodes and weights by Newton iteration on the Legendre polynomial.
inline GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Integral of f over [a, b] with an n-point rule.
inline double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussLegendreRule rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

// Trapezoid rule on a periodic interval [a, b) with n nodes; spectrally
// accurate for smooth periodic integrands.
inline double integrate_periodic(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(a + i * h);
    return s * h;
}

struct QuadratureResult {
    double value = 0.0;
    double refinement_delta = 0.0;  // |value(grid) - value(grid/2)|
};

struct QuadratureGrid {
    int n0 = 64;   // first chart axis (theta on the sphere)
    int n1 = 128;  // second chart axis (phi on the sphere)
};

namespace detail {

struct AxisNodes {
    std::vector<double> x;
    std::vector<double> w;
};

enum class AxisRuleKind { periodic_full, gl, sphere_cos };

inline AxisNodes axis_nodes(AxisRuleKind kind, double lo, double hi, int n) {
    AxisNodes out;
    out.x.resize(n);
    out.w.resize(n);
    switch (kind) {
        case AxisRuleKind::periodic_full: {
            const double h = (hi - lo) / n;
            for (int i = 0; i < n; ++i) {
                out.x[i] = lo + i * h;
                out.w[i] = h;
            }
            break;
        }
        case AxisRuleKind::gl: {
            const GaussLegendreRule rule = gauss_legendre(n);
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int i = 0; i < n; ++i) {
                out.x[i] = mid + half * rule.nodes[i];
                out.w[i] = rule.weights[i] * half;
            }
            break;
        }
        case AxisRuleKind::sphere_cos: {
            // u = cos(theta); the sin(theta) part of the area weight is
            // absorbed into the substitution.
            const GaussLegendreRule rule = gauss_legendre(n);
            const double ulo = std::cos(hi), uhi = std::cos(lo);
            const double mid = 0.5 * (ulo + uhi), half = 0.5 * (uhi - ulo);
            for (int i = 0; i < n; ++i) {
                const double u = mid + half * rule.nodes[i];
                out.x[i] = std::acos(u);
                out.w[i] = rule.weights[i] * half;
            }
            break;
        }
    }
    return out;
}

// Integral of f(p) dA over a coordinate box at one fixed grid.
inline double box_integral_once(const ManifoldModel& m, const std::function<double(const Vec2&)>& f,
                                double lo0, double hi0, double lo1, double hi1, int n0, int n1) {
    const bool sphere_theta = (m.name == "sphere");
    const auto kind0 = sphere_theta ? AxisRuleKind::sphere_cos
                       : (m.domain.axis[0].periodic && lo0 == m.domain.axis[0].lo &&
                          hi0 == m.domain.axis[0].hi)
                           ? AxisRuleKind::periodic_full
                           : AxisRuleKind::gl;
    const auto kind1 = (m.domain.axis[1].periodic && lo1 == m.domain.axis[1].lo &&
                        hi1 == m.domain.axis[1].hi)
                           ? AxisRuleKind::periodic_full
                           : AxisRuleKind::gl;
    const AxisNodes a0 = axis_nodes(kind0, lo0, hi0, n0);
    const AxisNodes a1 = axis_nodes(kind1, lo1, hi1, n1);

    double total = 0.0;
    for (int i = 0; i < n0; ++i) {
        double row = 0.0;
        for (int j = 0; j < n1; ++j) {
            const Vec2 p{a0.x[i], a1.x[j]};
            double weight = std::sqrt(m.metric(p).det());
            if (sphere_theta) weight /= std::sin(p[0]);  // sin already in du
            row += a1.w[j] * f(p) * weight;
        }
        total += a0.w[i] * row;
    }
    return total;
}

}  // namespace detail

// Integral of f dA over a coordinate box, with a grid-halving refinement
// estimate. Bounds defaulting to the chart box integrate the whole chart.
inline QuadratureResult integrate_box(const ManifoldModel& m,
                                      const std::function<double(const Vec2&)>& f, double lo0,
                                      double hi0, double lo1, double hi1,
                                      const QuadratureGrid& grid = {}) {
    QuadratureResult r;
    r.value = detail::box_integral_once(m, f, lo0, hi0, lo1, hi1, grid.n0, grid.n1);
    const double coarse = detail::box_integral_once(m, f, lo0, hi0, lo1, hi1,
                                                    std::max(2, grid.n0 / 2), std::max(2, grid.n1 / 2));
    r.refinement_delta = std::abs(r.value - coarse);
    return r;
}

inline QuadratureResult integrate_chart(const ManifoldModel& m,
                                        const std::function<double(const Vec2&)>& f,
                                        const QuadratureGrid& grid = {}) {
    return integrate_box(m, f, m.domain.axis[0].lo, m.domain.axis[0].hi, m.domain.axis[1].lo,
                         m.domain.axis[1].hi, grid);
}

// Line integral of f along a curve with the metric length element
// ds = |gamma'|_g dt, composite Gauss-Legendre.
inline double integrate_curve(const ManifoldModel& m, const CurvePath& curve,
                              const std::function<double(double)>& f, int panels = 64,
                              int nodes_per_panel = 8) {
    const GaussLegendreRule rule = gauss_legendre(nodes_per_panel);
    const double len = (curve.t1 - curve.t0) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = curve.t0 + p * len;
        const double mid = a + 0.5 * len, half = 0.5 * len;
        for (int i = 0; i < nodes_per_panel; ++i) {
            const double t = mid + half * rule.nodes[i];
            const Vec2 x = curve.position(t);
            const Vec2 v = curve.velocity(t);
            total += rule.weights[i] * half * f(t) * std::sqrt(m.inner(x, v, v));
        }
    }
    return total;
}

// Plain integral of f(t) dt over [a, b], composite Gauss-Legendre.
inline double integrate_time(const std::function<double(double)>& f, double a, double b,
                             int panels = 64, int nodes_per_panel = 8) {
    const GaussLegendreRule rule = gauss_legendre(nodes_per_panel);
    const double len = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * len;
        const double mid = lo + 0.5 * len, half = 0.5 * len;
        for (int i = 0; i < nodes_per_panel; ++i)
            total += rule.weights[i] * half * f(mid + half * rule.nodes[i]);
    }
    return total;
}

}  // namespace torsionfield
