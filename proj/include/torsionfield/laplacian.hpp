#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionfield/connection.hpp"
#include "torsionfield/fields.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"
#include "torsionfield/quadrature.hpp"
#include "torsionfield/random_field.hpp"
#include "torsionfield/stoch_connection.hpp"

namespace torsionfield {

// Sign convention: Delta = div grad, so on the flat torus
// Delta cos(x) = -cos(x) and sphere harmonics have eigenvalues -l(l+1).

// (grad f)^i = g^{ij} d_j f.
inline Vec2 gradient(const ManifoldModel& m, const ScalarFieldExpr& f, const Vec2& p) {
    return m.metric(p).inverse() * f.gradient(p);
}

// d_i log sqrt(det g) = (1/2) tr(g^{-1} d_i g), analytic.
inline Vec2 log_volume_gradient(const ManifoldModel& m, const Vec2& p) {
    const Mat2 ginv = m.metric(p).inverse();
    const MetricPartials dg = m.metric_partials(p);
    Vec2 out;
    for (int i = 0; i < 2; ++i) {
        double tr = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) tr += ginv(a, b) * dg.d[i](b, a);
        out[i] = 0.5 * tr;
    }
    return out;
}

// div X = d_i X^i + X^i d_i log sqrt(det g).
inline double divergence(const ManifoldModel& m, const VectorFieldExpr& x, const Vec2& p) {
    const Mat2 jx = x.jacobian(p);
    const Vec2 xv = x.components(p);
    const Vec2 lv = log_volume_gradient(m, p);
    return jx(0, 0) + jx(1, 1) + dot(xv, lv);
}

inline double laplacian(const ManifoldModel& m, const ScalarFieldExpr& f, const Vec2& p) {
    // div grad f with the gradient expanded analytically:
    // Delta f = g^{ij} d_i d_j f + d_i(g^{ij}) d_j f + g^{ij} d_j f d_i log sqrt(g)
    const Mat2 g = m.metric(p);
    const Mat2 ginv = g.inverse();
    const MetricPartials dg = m.metric_partials(p);
    const Vec2 df = f.gradient(p);
    const Mat2 hf = f.hessian(p);
    const Vec2 lv = log_volume_gradient(m, p);

    double out = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            out += ginv(i, j) * hf(i, j) + ginv(i, j) * df[j] * lv[i];
            // d_i g^{ij} = -(g^{-1} d_i g g^{-1})_{ij}
            double dginv = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) dginv -= ginv(i, a) * dg.d[i](a, b) * ginv(b, j);
            out += dginv * df[j];
        }
    return out;
}

// Randomized gradient: grad~ f = eps grad f, the unique vector with
// <X, grad~ f> = eps X(f) for all X.
inline Vec2 stochastic_gradient(const ManifoldModel& m, const FieldRealization& r,
                                const ScalarFieldExpr& f, const Vec2& p) {
    m.require_in_domain(p);
    return gradient(m, f, p) * r.eval_unchecked(p).eps;
}

// grad~ f as a field with analytic jacobian, for composing with the
// divergence.
inline VectorFieldExpr stochastic_gradient_field(const ManifoldModel& m, const FieldRealization& r,
                                                 const ScalarFieldExpr& f) {
    VectorFieldExpr grad_f;
    grad_f.components = [&m, f](const Vec2& p) { return gradient(m, f, p); };
    grad_f.jacobian = [&m, f](const Vec2& p) {
        const Mat2 ginv = m.metric(p).inverse();
        const MetricPartials dg = m.metric_partials(p);
        const Vec2 df = f.gradient(p);
        const Mat2 hf = f.hessian(p);
        Mat2 out;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) {
                double s = 0.0;
                for (int j = 0; j < 2; ++j) {
                    s += ginv(i, j) * hf(j, k);
                    double dginv = 0.0;
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) dginv -= ginv(i, a) * dg.d[k](a, b) * ginv(b, j);
                    s += dginv * df[j];
                }
                out(i, k) = s;
            }
        return out;
    };
    return randomized_field_expr(r, grad_f);
}

enum class LaplaceRoute { formula, composed };

// Randomized divergence div~ X. formula: eps div X + X(eps); composed: the
// classical divergence of the product field eps X.
inline double stochastic_divergence(const ManifoldModel& m, const FieldRealization& r,
                                    const VectorFieldExpr& x, const Vec2& p,
                                    LaplaceRoute route = LaplaceRoute::formula) {
    m.require_in_domain(p);
    if (route == LaplaceRoute::composed) return divergence(m, randomized_field_expr(r, x), p);
    const FieldValue f = r.eval_unchecked(p);
    return f.eps * divergence(m, x, p) + dot(x.components(p), f.grad);
}

// Randomized Laplacian. formula: eps^2 Delta f + 2 eps <grad f, grad eps>;
// composed: div~ applied to the grad~ field.
inline double stochastic_laplacian(const ManifoldModel& m, const FieldRealization& r,
                                   const ScalarFieldExpr& f, const Vec2& p,
                                   LaplaceRoute route = LaplaceRoute::formula) {
    m.require_in_domain(p);
    if (route == LaplaceRoute::composed) {
        // div~ (grad~ f) = div(eps * (eps grad f))
        const VectorFieldExpr grad_tilde = stochastic_gradient_field(m, r, f);
        return divergence(m, randomized_field_expr(r, grad_tilde), p);
    }
    const FieldValue fv = r.eval_unchecked(p);
    const Vec2 grad_f = gradient(m, f, p);
    return fv.eps * fv.eps * laplacian(m, f, p) + 2.0 * fv.eps * dot(grad_f, fv.grad);
}

// ---------------------------------------------------------------------------
// Domains with boundary for the divergence theorem. The identity carries a
// minus sign because the normal points inward.
// ---------------------------------------------------------------------------

struct BoundaryPatch {
    CurvePath curve;                                  // boundary parametrization
    std::function<Vec2(const Vec2&)> inward_normal;  // g-unit normal into the domain
};

struct BoundedDomain {
    ManifoldPtr manifold;
    std::string name;
    double lo0, hi0, lo1, hi1;  // coordinate box
    std::vector<BoundaryPatch> boundary;
};

// Sphere band theta in [theta_lo, theta_hi]; boundary circles at both ends.
inline BoundedDomain make_spherical_band(double theta_lo = 0.3,
                                         double theta_hi = std::numbers::pi / 2.0,
                                         double radius = 1.0) {
    BoundedDomain d;
    d.manifold = make_sphere(radius);
    d.name = "spherical-band";
    d.lo0 = theta_lo;
    d.hi0 = theta_hi;
    d.lo1 = 0.0;
    d.hi1 = 2.0 * std::numbers::pi;
    const double r = radius;
    {
        BoundaryPatch low;
        low.curve = sphere_latitude_curve(theta_lo);
        low.inward_normal = [r](const Vec2&) { return Vec2{1.0 / r, 0.0}; };
        d.boundary.push_back(std::move(low));
    }
    {
        BoundaryPatch high;
        high.curve = sphere_latitude_curve(theta_hi);
        high.inward_normal = [r](const Vec2&) { return Vec2{-1.0 / r, 0.0}; };
        d.boundary.push_back(std::move(high));
    }
    return d;
}

// Flat-torus strip x2 in [y_lo, y_hi], periodic in x1.
inline BoundedDomain make_torus_strip(double y_lo = 1.0, double y_hi = 4.0) {
    BoundedDomain d;
    d.manifold = make_flat_torus();
    d.name = "torus-strip";
    d.lo0 = 0.0;
    d.hi0 = 2.0 * std::numbers::pi;
    d.lo1 = y_lo;
    d.hi1 = y_hi;
    {
        BoundaryPatch low;
        low.curve = line_curve({0.0, y_lo}, {1.0, 0.0}, 0.0, 2.0 * std::numbers::pi);
        low.inward_normal = [](const Vec2&) { return Vec2{0.0, 1.0}; };
        d.boundary.push_back(std::move(low));
    }
    {
        BoundaryPatch high;
        high.curve = line_curve({0.0, y_hi}, {1.0, 0.0}, 0.0, 2.0 * std::numbers::pi);
        high.inward_normal = [](const Vec2&) { return Vec2{0.0, -1.0}; };
        d.boundary.push_back(std::move(high));
    }
    return d;
}

struct DivergenceTheoremReport {
    double volume_integral = 0.0;    // int div~ X dV
    double boundary_integral = 0.0;  // -int <n, X~> ds, inward normal
    double residual = 0.0;
    double volume_refinement = 0.0;
    bool degenerate_input = false;
};

inline DivergenceTheoremReport divergence_theorem_check(const BoundedDomain& d,
                                                        const FieldRealization& r,
                                                        const VectorFieldExpr& x,
                                                        const QuadratureGrid& grid = {},
                                                        int boundary_nodes = 512) {
    const ManifoldModel& m = *d.manifold;
    DivergenceTheoremReport out;
    out.degenerate_input = r.degenerate();

    const QuadratureResult vol = integrate_box(
        m,
        [&](const Vec2& p) { return stochastic_divergence(m, r, x, p, LaplaceRoute::formula); },
        d.lo0, d.hi0, d.lo1, d.hi1, grid);
    out.volume_integral = vol.value;
    out.volume_refinement = vol.refinement_delta;

    double flux = 0.0;
    for (const BoundaryPatch& patch : d.boundary) {
        // boundary circles are periodic: trapezoid in the curve parameter
        const double t0 = patch.curve.t0, t1 = patch.curve.t1;
        const double h = (t1 - t0) / boundary_nodes;
        double acc = 0.0;
        for (int i = 0; i < boundary_nodes; ++i) {
            const double t = t0 + i * h;
            const Vec2 p = patch.curve.position(t);
            const Vec2 v = patch.curve.velocity(t);
            const double ds = std::sqrt(m.inner(p, v, v));
            const Vec2 n = patch.inward_normal(p);
            const double eps = r.eval_unchecked(p).eps;
            acc += m.inner(p, n, x.components(p)) * eps * ds;
        }
        flux += acc * h;
    }
    out.boundary_integral = -flux;
    out.residual = std::abs(out.volume_integral - out.boundary_integral);
    return out;
}

}  // namespace torsionfield
