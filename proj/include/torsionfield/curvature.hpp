#pragma once

#include <cmath>
#include <stdexcept>

#include "torsionfield/connection.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"

namespace torsionfield {

// Curvature sign convention, used everywhere in this library:
//   R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_{[X,Y]} Z
// In coordinates (coordinate brackets vanish):
//   R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
// The (0,4) tensor is R_{ijkl} = < R(e_i,e_j) e_k , e_l > and the sectional
// curvature of span(u, v) is
//   K = R(u,v,v,u) / (|u|^2 |v|^2 - <u,v>^2),
// which makes the unit sphere come out at K = +1.

struct CurvaturePair {
    RiemannUp up;    // R^l_{kij}
    RiemannLow low;  // R_{ijkl}
};

inline CurvaturePair curvature_at(const ManifoldModel& m, const Vec2& p, double h_fd = kFdStep) {
    m.require_in_domain(p);
    const Christoffel gamma = christoffel_unchecked(m, p);
    const auto dgamma = christoffel_partials_fd(m, p, h_fd);
    CurvaturePair out;
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double s = dgamma[i](l, j, k) - dgamma[j](l, i, k);
                    for (int mm = 0; mm < 2; ++mm)
                        s += gamma(l, i, mm) * gamma(mm, j, k) - gamma(l, j, mm) * gamma(mm, i, k);
                    out.up(l, k, i, j) = s;
                }
    const Mat2 g = m.metric(p);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    double s = 0.0;
                    for (int mm = 0; mm < 2; ++mm) s += g(l, mm) * out.up(mm, k, i, j);
                    out.low(i, j, k, l) = s;
                }
    return out;
}

// Sectional curvature of the plane spanned by (u, v) at p.
inline double sectional_curvature(const ManifoldModel& m, const Vec2& p, const Vec2& u,
                                  const Vec2& v, double h_fd = kFdStep) {
    const CurvaturePair r = curvature_at(m, p, h_fd);
    const double num = r.low.evaluate(u, v, v, u);
    const double gu = m.inner(p, u, u), gv = m.inner(p, v, v), guv = m.inner(p, u, v);
    const double gram = gu * gv - guv * guv;
    const double scale = std::max(1.0, gu * gv);
    if (!(gram > 1e-12 * scale))
        throw std::invalid_argument("sectional_curvature: u, v do not span a plane");
    return num / gram;
}

// Ricci tensor Ric_{kj} = R^l_{klj} (contraction of the upper index with the
// first bracket slot) and scalar curvature S = g^{kj} Ric_{kj}.
struct RicciScalar {
    Mat2 ricci;
    double scalar = 0.0;
};

inline RicciScalar ricci_scalar_from(const RiemannUp& up, const Mat2& g) {
    RicciScalar out;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int l = 0; l < 2; ++l) s += up(l, k, l, j);
            out.ricci(k, j) = s;
        }
    const Mat2 ginv = g.inverse();
    double s = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) s += ginv(k, j) * out.ricci(k, j);
    out.scalar = s;
    return out;
}

inline RicciScalar ricci_scalar_at(const ManifoldModel& m, const Vec2& p, double h_fd = kFdStep) {
    return ricci_scalar_from(curvature_at(m, p, h_fd).up, m.metric(p));
}

// (R(u, v) w)^l contracted from the (1,3) tensor.
inline Vec2 curvature_operator(const RiemannUp& up, const Vec2& u, const Vec2& v, const Vec2& w) {
    Vec2 out;
    for (int l = 0; l < 2; ++l) {
        double s = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) s += up(l, k, i, j) * w[k] * u[i] * v[j];
        out[l] = s;
    }
    return out;
}

// Residual diagnostics for the index symmetries of R_{ijkl}.
struct CurvatureSymmetryResiduals {
    double skew_first = 0.0;   // R_{ijkl} + R_{jikl}
    double skew_last = 0.0;    // R_{ijkl} + R_{ijlk}
    double exchange = 0.0;     // R_{ijkl} - R_{klij}
    double bianchi1 = 0.0;     // R_{ijkl} + R_{jkil} + R_{kijl}
    double max() const { return std::max(std::max(skew_first, skew_last), std::max(exchange, bianchi1)); }
};

inline CurvatureSymmetryResiduals curvature_symmetry_residuals(const RiemannLow& r) {
    CurvatureSymmetryResiduals res;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    res.skew_first = std::max(res.skew_first, std::abs(r(i, j, k, l) + r(j, i, k, l)));
                    res.skew_last = std::max(res.skew_last, std::abs(r(i, j, k, l) + r(i, j, l, k)));
                    res.exchange = std::max(res.exchange, std::abs(r(i, j, k, l) - r(k, l, i, j)));
                    res.bianchi1 =
                        std::max(res.bianchi1, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
                }
    return res;
}

}  // namespace torsionfield
