#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "torsionfield/fields.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"

namespace torsionfield {

// Step used for second-level derivatives (partials of Christoffel symbols)
// and for finite-difference cross-checks, in chart units.
inline constexpr double kFdStep = 1e-5;

// Levi-Civita Christoffel symbols from metric value and partials.
// Gamma^k_{ij} = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
inline Christoffel christoffel_from(const Mat2& g, const MetricPartials& dg) {
    const double det = g.det();
    if (!(det > 0.0) || !(sym_eigenvalues(g)[0] > 0.0))
        throw std::runtime_error("christoffel_from: metric not positive definite (det = " +
                                 std::to_string(det) + ")");
    const Mat2 ginv = g.inverse();
    Christoffel gamma;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l)
                    s += ginv(k, l) * (dg.d[i](j, l) + dg.d[j](i, l) - dg.d[l](i, j));
                gamma(k, i, j) = 0.5 * s;
            }
    return gamma;
}

inline Christoffel christoffel_at(const ManifoldModel& m, const Vec2& p) {
    m.require_in_domain(p);
    return christoffel_from(m.metric(p), m.metric_partials(p));
}

// Unchecked variant for finite-difference stencils that may poke slightly
// past the chart box; the metric closures are analytic in a neighborhood.
inline Christoffel christoffel_unchecked(const ManifoldModel& m, const Vec2& p) {
    return christoffel_from(m.metric(p), m.metric_partials(p));
}

// d Gamma^k_{ij} / d x^h by central differences, dgamma[h](k,i,j).
inline std::array<Christoffel, 2> christoffel_partials_fd(const ManifoldModel& m, const Vec2& p,
                                                          double h = kFdStep) {
    std::array<Christoffel, 2> out;
    for (int axis = 0; axis < 2; ++axis) {
        Vec2 pp = p, pm = p;
        pp[axis] += h;
        pm[axis] -= h;
        const Christoffel gp = christoffel_unchecked(m, pp);
        const Christoffel gm = christoffel_unchecked(m, pm);
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    out[axis](k, i, j) = (gp(k, i, j) - gm(k, i, j)) / (2.0 * h);
    }
    return out;
}

// Levi-Civita covariant derivative (D_X Y)^k = X^i d_i Y^k + X^i Y^j Gamma^k_{ij}.
inline Vec2 covariant_derivative(const ManifoldModel& m, const VectorFieldExpr& x,
                                 const VectorFieldExpr& y, const Vec2& p) {
    m.require_in_domain(p);
    const Christoffel gamma = christoffel_unchecked(m, p);
    const Vec2 xv = x.components(p);
    const Vec2 yv = y.components(p);
    const Mat2 jy = y.jacobian(p);
    Vec2 r;
    for (int k = 0; k < 2; ++k) {
        double s = 0.0;
        for (int i = 0; i < 2; ++i) {
            s += xv[i] * jy(k, i);
            for (int j = 0; j < 2; ++j) s += xv[i] * yv[j] * gamma(k, i, j);
        }
        r[k] = s;
    }
    return r;
}

// (D_v X)^k = v^i d_i X^k + v^i X^j Gamma^k_{ij} for a tangent vector v.
inline Vec2 covariant_derivative_direction(const ManifoldModel& m, const Vec2& v,
                                           const VectorFieldExpr& x, const Vec2& p) {
    const Christoffel gamma = christoffel_unchecked(m, p);
    const Mat2 jx = x.jacobian(p);
    const Vec2 xv = x.components(p);
    Vec2 out;
    for (int k = 0; k < 2; ++k) {
        double s = 0.0;
        for (int i = 0; i < 2; ++i) {
            s += v[i] * jx(k, i);
            for (int j = 0; j < 2; ++j) s += v[i] * xv[j] * gamma(k, i, j);
        }
        out[k] = s;
    }
    return out;
}

// D_X Y as a field: the value is the usual covariant derivative; the
// jacobian combines analytic field partials with the finite-difference
// partials of the Christoffel symbols. Needed by nested-derivative
// evaluations (curvature from first principles).
inline VectorFieldExpr covariant_derivative_field(const ManifoldModel& m, const VectorFieldExpr& x,
                                                  const VectorFieldExpr& y) {
    VectorFieldExpr out;
    out.components = [&m, x, y](const Vec2& p) { return covariant_derivative(m, x, y, p); };
    out.jacobian = [&m, x, y](const Vec2& p) {
        const Christoffel gamma = christoffel_unchecked(m, p);
        const auto dgamma = christoffel_partials_fd(m, p);
        const Vec2 xv = x.components(p), yv = y.components(p);
        const Mat2 jx = x.jacobian(p), jy = y.jacobian(p);
        const auto hy = y.second_partials_at(p);
        Mat2 out_j;
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                double s = 0.0;
                for (int i = 0; i < 2; ++i) {
                    s += jx(i, l) * jy(k, i) + xv[i] * hy[k](l, i);
                    for (int j = 0; j < 2; ++j)
                        s += jx(i, l) * yv[j] * gamma(k, i, j) + xv[i] * jy(j, l) * gamma(k, i, j) +
                             xv[i] * yv[j] * dgamma[l](k, i, j);
                }
                out_j(k, l) = s;
            }
        return out_j;
    };
    return out;
}

// [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k. Metric-free.
inline Vec2 lie_bracket(const VectorFieldExpr& x, const VectorFieldExpr& y, const Vec2& p) {
    const Vec2 xv = x.components(p);
    const Vec2 yv = y.components(p);
    const Mat2 jx = x.jacobian(p);
    const Mat2 jy = y.jacobian(p);
    Vec2 r;
    for (int k = 0; k < 2; ++k) {
        double s = 0.0;
        for (int i = 0; i < 2; ++i) s += xv[i] * jy(k, i) - yv[i] * jx(k, i);
        r[k] = s;
    }
    return r;
}

// Directional derivative X(f) at p for analytic f.
inline double field_derivative(const VectorFieldExpr& x, const ScalarFieldExpr& f, const Vec2& p) {
    return dot(x.components(p), f.gradient(p));
}

// X(<Y,Z>) evaluated analytically: X^k [ d_k g_ij Y^i Z^j + g_ij (d_k Y^i Z^j + Y^i d_k Z^j) ].
inline double derivative_of_inner(const ManifoldModel& m, const VectorFieldExpr& x,
                                  const VectorFieldExpr& y, const VectorFieldExpr& z,
                                  const Vec2& p) {
    const Vec2 xv = x.components(p);
    const Vec2 yv = y.components(p);
    const Vec2 zv = z.components(p);
    const Mat2 jy = y.jacobian(p);
    const Mat2 jz = z.jacobian(p);
    const Mat2 g = m.metric(p);
    const MetricPartials dg = m.metric_partials(p);
    double s = 0.0;
    for (int k = 0; k < 2; ++k) {
        double dk = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                dk += dg.d[k](i, j) * yv[i] * zv[j] + g(i, j) * (jy(i, k) * zv[j] + yv[i] * jz(j, k));
        s += xv[k] * dk;
    }
    return s;
}

}  // namespace torsionfield
