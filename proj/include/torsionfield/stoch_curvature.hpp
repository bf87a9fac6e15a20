#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionfield/connection.hpp"
#include "torsionfield/curvature.hpp"
#include "torsionfield/fields.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"
#include "torsionfield/quadrature.hpp"
#include "torsionfield/random_field.hpp"
#include "torsionfield/rng.hpp"
#include "torsionfield/stoch_connection.hpp"

namespace torsionfield {

enum class CurvatureMethod { scaled, direct };

// Randomized curvature operator R~(X,Y)Z from first principles:
//   D_{X~} D_{Y~} Z~ - D_{Y~} D_{X~} Z~ - D_{[X~,Y~]} Z~
// with X~ = eps X as product fields. The inner covariant derivatives are
// fields whose jacobians carry one finite-difference layer (partials of the
// Christoffel symbols).
inline Vec2 stochastic_curvature_operator_direct(const ManifoldModel& m, const FieldRealization& r,
                                                 const VectorFieldExpr& x, const VectorFieldExpr& y,
                                                 const VectorFieldExpr& z, const Vec2& p) {
    const VectorFieldExpr ex = randomized_field_expr(r, x);
    const VectorFieldExpr ey = randomized_field_expr(r, y);
    const VectorFieldExpr ez = randomized_field_expr(r, z);
    const VectorFieldExpr d_yz = covariant_derivative_field(m, ey, ez);
    const VectorFieldExpr d_xz = covariant_derivative_field(m, ex, ez);
    const Vec2 t1 = covariant_derivative(m, ex, d_yz, p);
    const Vec2 t2 = covariant_derivative(m, ey, d_xz, p);
    const Vec2 bracket = lie_bracket(ex, ey, p);
    const Vec2 t3 = covariant_derivative_direction(m, bracket, ez, p);
    return t1 - t2 - t3;
}

// R~^l_{kij}. scaled: eps^3 R^l_{kij}; direct: the nested evaluation above on
// coordinate fields.
inline RiemannUp stochastic_curvature_at(const ManifoldModel& m, const FieldRealization& r,
                                         const Vec2& p,
                                         CurvatureMethod method = CurvatureMethod::scaled) {
    m.require_in_domain(p);
    if (method == CurvatureMethod::scaled) {
        const double eps = r.eval_unchecked(p).eps;
        return curvature_at(m, p).up * (eps * eps * eps);
    }
    RiemannUp out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const Vec2 v = stochastic_curvature_operator_direct(
                    m, r, coordinate_field(i), coordinate_field(j), coordinate_field(k), p);
                for (int l = 0; l < 2; ++l) out(l, k, i, j) = v[l];
            }
    return out;
}

// Randomized (0,4) tensor R~_{ijkl} = <R~(e_i,e_j) e_k, e_l~> = eps^4 R_{ijkl},
// with the symmetry residuals of the classical patterns.
struct StochasticRiemann4 {
    RiemannLow tensor;
    CurvatureSymmetryResiduals residuals;
};

inline StochasticRiemann4 stochastic_riemann_4tensor(const ManifoldModel& m,
                                                     const FieldRealization& r, const Vec2& p) {
    m.require_in_domain(p);
    const double eps = r.eval_unchecked(p).eps;
    StochasticRiemann4 out;
    out.tensor = curvature_at(m, p).low * (eps * eps * eps * eps);
    out.residuals = curvature_symmetry_residuals(out.tensor);
    return out;
}

// Multilinear form evaluation <R~(X,Y)Z, W~> with the direct operator; the
// scaled route is eps^4 R(X,Y,Z,W).
inline double stochastic_riemann_form(const ManifoldModel& m, const FieldRealization& r,
                                      const VectorFieldExpr& x, const VectorFieldExpr& y,
                                      const VectorFieldExpr& z, const VectorFieldExpr& w,
                                      const Vec2& p,
                                      CurvatureMethod method = CurvatureMethod::scaled) {
    m.require_in_domain(p);
    const double eps = r.eval_unchecked(p).eps;
    if (method == CurvatureMethod::scaled) {
        const CurvaturePair c = curvature_at(m, p);
        return eps * eps * eps * eps *
               c.low.evaluate(x.components(p), y.components(p), z.components(p), w.components(p));
    }
    const Vec2 rv = stochastic_curvature_operator_direct(m, r, x, y, z, p);
    return m.inner(p, rv, w.components(p) * eps);
}

// Sectional curvature of span(u, v) under the randomized tensor and metric.
// The eps^4 factors cancel, which is the invariance this returns for checking.
struct SectionalPair {
    double randomized = 0.0;
    double classical = 0.0;
};

inline SectionalPair stochastic_sectional(const ManifoldModel& m, const FieldRealization& r,
                                          const Vec2& p, const Vec2& u, const Vec2& v) {
    m.require_in_domain(p);
    const CurvaturePair c = curvature_at(m, p);
    const double gu = m.inner(p, u, u), gv = m.inner(p, v, v), guv = m.inner(p, u, v);
    const double gram = gu * gv - guv * guv;
    if (!(gram > 1e-12 * std::max(1.0, gu * gv)))
        throw std::invalid_argument("stochastic_sectional: u, v do not span a plane");
    const double num = c.low.evaluate(u, v, v, u);

    const double eps = r.eval_unchecked(p).eps;
    const double e2 = eps * eps;
    const double num_rand = e2 * e2 * num;
    const double gram_rand = (e2 * gu) * (e2 * gv) - (e2 * guv) * (e2 * guv);

    SectionalPair out;
    out.classical = num / gram;
    out.randomized = num_rand / gram_rand;
    return out;
}

// Ricci tensor and scalar curvature of the randomized tensor. The trace uses
// the deterministic metric, so Ric~ = eps^3 Ric and S~ = eps^3 S.
struct StochasticRicciScalar {
    Mat2 ricci;
    double scalar = 0.0;
    Mat2 classical_ricci;
    double classical_scalar = 0.0;
    double eps = 1.0;
};

inline StochasticRicciScalar stochastic_ricci_scalar(const ManifoldModel& m,
                                                     const FieldRealization& r, const Vec2& p) {
    m.require_in_domain(p);
    const CurvaturePair c = curvature_at(m, p);
    const Mat2 g = m.metric(p);
    const RicciScalar classical = ricci_scalar_from(c.up, g);
    const double eps = r.eval_unchecked(p).eps;
    const double e3 = eps * eps * eps;
    StochasticRicciScalar out;
    out.classical_ricci = classical.ricci;
    out.classical_scalar = classical.scalar;
    const RicciScalar rand = ricci_scalar_from(c.up * e3, g);
    out.ricci = rand.ricci;
    out.scalar = rand.scalar;
    out.eps = eps;
    return out;
}

// Covariant derivative of the randomized curvature along eps e_h, two routes.
//   formula: eps^4 [d_h R^l_{kij} + Gamma^l_{hm} R^m_{kij}] + 3 eps^3 d_h(eps) R^l_{kij}
//   direct:  eps [d_h (eps^3 R^l_{kij}) + eps^3 R^m_{kij} Gamma^l_{hm}]
// Both treat R(e_i,e_j)e_k as a vector field with (i,j,k) held fixed; the
// product rule is applied symbolically on one side and numerically on the
// other. One finite-difference layer each, so agreement is ~1e-5.
struct CurvatureDerivativePair {
    RiemannUp formula;
    RiemannUp direct;
    double max_diff = 0.0;
};

inline CurvatureDerivativePair covariant_derivative_rtilde(const ManifoldModel& m,
                                                           const FieldRealization& r, const Vec2& p,
                                                           int h_index, double h_fd = 1e-4) {
    m.require_in_domain(p);
    const Christoffel gamma = christoffel_unchecked(m, p);
    const FieldValue f = r.eval_unchecked(p);
    const RiemannUp base = curvature_at(m, p).up;

    Vec2 pp = p, pm = p;
    pp[h_index] += h_fd;
    pm[h_index] -= h_fd;
    const RiemannUp up_p = curvature_at(m, pp).up;
    const RiemannUp up_m = curvature_at(m, pm).up;
    const double eps_p = r.eval_unchecked(pp).eps;
    const double eps_m = r.eval_unchecked(pm).eps;

    const double e3 = f.eps * f.eps * f.eps;
    const double e4 = e3 * f.eps;

    CurvatureDerivativePair out;
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double dR = (up_p(l, k, i, j) - up_m(l, k, i, j)) / (2.0 * h_fd);
                    double conn = 0.0;
                    for (int mm = 0; mm < 2; ++mm) conn += gamma(l, h_index, mm) * base(mm, k, i, j);
                    out.formula(l, k, i, j) =
                        e4 * (dR + conn) + 3.0 * e3 * f.grad[h_index] * base(l, k, i, j);

                    const double d_prod = (eps_p * eps_p * eps_p * up_p(l, k, i, j) -
                                           eps_m * eps_m * eps_m * up_m(l, k, i, j)) /
                                          (2.0 * h_fd);
                    double conn_direct = 0.0;
                    for (int mm = 0; mm < 2; ++mm)
                        conn_direct += e3 * base(mm, k, i, j) * gamma(l, h_index, mm);
                    out.direct(l, k, i, j) = f.eps * (d_prod + conn_direct);
                }
    out.max_diff = out.formula.max_abs_diff(out.direct);
    return out;
}

// Cyclic derivative comparison for the randomized tensor, evaluated on a test
// field W under the operator-form reading: each term differentiates the
// vector field eps^3 R(Y,Z) W along eps X. The right side is the matching
// cyclic sum 3 eps^3 (X(eps) eps^3 R(Y,Z)W + ...). Published as a report;
// nothing is asserted about the difference.
struct Bianchi2Report {
    Vec2 lhs;
    Vec2 rhs;
    double residual_norm = 0.0;
    Vec2 classical_lhs;  // same cyclic derivative sum with eps frozen to 1
};

inline Bianchi2Report bianchi2_residual(const ManifoldModel& m, const FieldRealization& r,
                                        const Vec2& p, const VectorFieldExpr& x,
                                        const VectorFieldExpr& y, const VectorFieldExpr& z,
                                        const VectorFieldExpr& w, double h_fd = 1e-5) {
    m.require_in_domain(p);

    // field q |-> eps(q)^scale * R(a,b) w |_q
    auto curv_field = [&m, &w](const FieldRealization* field, const VectorFieldExpr& a,
                               const VectorFieldExpr& b) {
        return [&m, &w, field, &a, &b](const Vec2& q) {
            const RiemannUp up = curvature_at(m, q).up;
            Vec2 val = curvature_operator(up, a.components(q), b.components(q), w.components(q));
            if (field) {
                const double eps = field->eval_unchecked(q).eps;
                val = val * (eps * eps * eps);
            }
            return val;
        };
    };

    auto derivative_along = [&m, h_fd](const std::function<Vec2(const Vec2&)>& field_vals,
                                       const Vec2& direction, const Vec2& q) {
        // D_dir of the field: FD jacobian plus the connection term
        const Christoffel gamma = christoffel_unchecked(m, q);
        Mat2 jac;
        for (int a = 0; a < 2; ++a) {
            Vec2 qp = q, qm = q;
            qp[a] += h_fd;
            qm[a] -= h_fd;
            const Vec2 vp = field_vals(qp), vm = field_vals(qm);
            for (int k = 0; k < 2; ++k) jac(k, a) = (vp[k] - vm[k]) / (2.0 * h_fd);
        }
        const Vec2 val = field_vals(q);
        Vec2 out;
        for (int k = 0; k < 2; ++k) {
            double s = 0.0;
            for (int i = 0; i < 2; ++i) {
                s += direction[i] * jac(k, i);
                for (int j = 0; j < 2; ++j) s += direction[i] * val[j] * gamma(k, i, j);
            }
            out[k] = s;
        }
        return out;
    };

    const FieldValue f = r.eval_unchecked(p);
    const double e3 = f.eps * f.eps * f.eps;
    const VectorFieldExpr* fields[3][2] = {{&y, &z}, {&z, &x}, {&x, &y}};
    const VectorFieldExpr* directions[3] = {&x, &y, &z};

    Bianchi2Report out;
    for (int c = 0; c < 3; ++c) {
        const Vec2 dir_tilde = directions[c]->components(p) * f.eps;
        out.lhs += derivative_along(curv_field(&r, *fields[c][0], *fields[c][1]), dir_tilde, p);
        out.classical_lhs +=
            derivative_along(curv_field(nullptr, *fields[c][0], *fields[c][1]), directions[c]->components(p), p);

        const double dir_eps = dot(directions[c]->components(p), f.grad);
        const Vec2 r_tilde = curv_field(&r, *fields[c][0], *fields[c][1])(p);
        out.rhs += r_tilde * (3.0 * e3 * dir_eps);
    }
    out.residual_norm = (out.lhs - out.rhs).norm();
    return out;
}

// Euler-form scaling on a surface: in a g-orthonormal frame {e1, e2} the
// randomized form evaluated with randomized-metric-orthonormal slots
// (e~_i = e_i / eps) satisfies
//   <R~(e1, e2) e~_2, (e~_1)~> = eps^2 K.
// The left side goes through the direct nested operator.
struct EulerFormScaling {
    double randomized = 0.0;
    double predicted = 0.0;  // eps^2 K
    double residual = 0.0;
};

inline EulerFormScaling euler_form_scaling(const ManifoldModel& m, const FieldRealization& r,
                                           const Vec2& p) {
    m.require_in_domain(p);
    const Mat2 g = m.metric(p);
    const Mat2 frame = sym_sqrt(g).inverse();
    const Vec2 e1{frame(0, 0), frame(1, 0)};
    const Vec2 e2{frame(0, 1), frame(1, 1)};
    const double eps = r.eval_unchecked(p).eps;

    const Vec2 rv = stochastic_curvature_operator_direct(m, r, constant_field(e1), constant_field(e2),
                                                         constant_field(e2 / eps), p);
    EulerFormScaling out;
    // last slot carries its own randomization: <., eps * (e1 / eps)> = <., e1>
    out.randomized = m.inner(p, rv, e1);
    out.predicted = eps * eps * sectional_curvature(m, p, e1, e2);
    out.residual = std::abs(out.randomized - out.predicted);
    return out;
}

// ---------------------------------------------------------------------------
// Gauss-Bonnet bookkeeping on the closed built-ins.
//
// On the sphere the chart excludes two polar caps. The caps are assembled
// analytically for the constant-curvature part of the integrand; the
// variance-weighted part omits the caps and reports an upper bound on the
// omitted mass instead. Flat torus: everything vanishes with K.
// ---------------------------------------------------------------------------

struct GaussBonnetReport {
    double chi = 0.0;
    double omega_integral = 0.0;           // (1/2pi) int K dA, caps assembled analytically
    double expected_omega_integral = 0.0;  // same with the E[eps^2] = 1 + V weight
    double deviation = 0.0;                // expected_omega_integral - chi
    double closed_form_deviation = 0.0;    // (1/2pi) int V K dA as its own quadrature
    double refinement_delta = 0.0;
    double cap_v_bound = 0.0;  // bound on the V-weighted mass omitted over the caps

    double mc_mean = 0.0;  // Monte Carlo estimate of int eps^2 Omega
    double mc_stderr = 0.0;
    std::size_t mc_realizations = 0;
    std::uint64_t mc_seed = 0;
    int mc_resampled = 0;  // degenerate draws replaced under the resample policy
};

inline GaussBonnetReport gauss_bonnet_deviation(const ManifoldModel& m, const FieldSpec& spec,
                                                const QuadratureGrid& grid = {},
                                                std::size_t mc_realizations = 200,
                                                std::uint64_t mc_seed = 20200729,
                                                DegeneratePolicy policy = DegeneratePolicy::resample_and_report) {
    double chi = 0.0;
    bool has_caps = false;
    if (m.name == "sphere") {
        chi = 2.0;
        has_caps = true;
    } else if (m.name == "flat-torus") {
        chi = 0.0;
    } else {
        throw std::invalid_argument("gauss_bonnet_deviation: " + m.name + " is not a closed surface");
    }

    const double two_pi = 2.0 * std::numbers::pi;
    auto k_at = [&m](const Vec2& p) { return sectional_curvature(m, p, {1, 0}, {0, 1}); };

    // analytic cap term: constant-K caps of the sphere chart
    double cap_area = 0.0, k_ref = 0.0;
    if (has_caps) {
        const double theta_min = m.domain.axis[0].lo;
        const double r2 = m.metric(Vec2{std::numbers::pi / 2.0, 0.0})(0, 0);  // R^2
        cap_area = 2.0 * two_pi * r2 * (1.0 - std::cos(theta_min));
        k_ref = k_at({std::numbers::pi / 2.0, 0.0});
    }
    const double cap_term = k_ref * cap_area / two_pi;

    GaussBonnetReport out;
    out.chi = chi;

    const QuadratureResult omega =
        integrate_chart(m, [&](const Vec2& p) { return k_at(p) / two_pi; }, grid);
    out.omega_integral = omega.value + cap_term;

    const QuadratureResult weighted = integrate_chart(
        m, [&](const Vec2& p) { return (1.0 + field_variance(spec, p)) * k_at(p) / two_pi; }, grid);
    out.expected_omega_integral = weighted.value + cap_term;
    out.deviation = out.expected_omega_integral - chi;

    const QuadratureResult vk = integrate_chart(
        m, [&](const Vec2& p) { return field_variance(spec, p) * k_at(p) / two_pi; }, grid);
    out.closed_form_deviation = vk.value;
    out.refinement_delta = omega.refinement_delta + weighted.refinement_delta + vk.refinement_delta;

    if (has_caps) {
        double v_bound = 0.0;
        for (std::size_t i = 1; i <= spec.truncation; ++i)
            v_bound += spec.sigma2(i) * spec.basis->sup_square_bound(i);
        out.cap_v_bound = std::abs(k_ref) * cap_area * v_bound / two_pi;
    }

    // Monte Carlo cross-check of int eps^2 Omega, resampling degenerate draws
    // when the policy allows and reporting how many were replaced.
    out.mc_seed = mc_seed;
    out.mc_realizations = mc_realizations;
    if (mc_realizations > 0 && spec.amplitude > 0.0) {
        double sum = 0.0, sumsq = 0.0;
        std::uint64_t draw = 0;
        for (std::size_t i = 0; i < mc_realizations; ++i) {
            FieldRealization real = sample_realization(spec, mix_seed(mc_seed, draw++));
            while (real.degenerate()) {
                if (policy == DegeneratePolicy::abort)
                    throw std::runtime_error("gauss_bonnet_deviation: degenerate realization, seed " +
                                             std::to_string(real.seed()));
                ++out.mc_resampled;
                real = sample_realization(spec, mix_seed(mc_seed, draw++));
            }
            const double sample = detail::box_integral_once(
                m,
                [&](const Vec2& p) {
                    const double eps = real.value(p);
                    return eps * eps * k_at(p) / two_pi;
                },
                m.domain.axis[0].lo, m.domain.axis[0].hi, m.domain.axis[1].lo, m.domain.axis[1].hi,
                grid.n0, grid.n1);
            const double estimate = sample + cap_term;
            sum += estimate;
            sumsq += estimate * estimate;
        }
        out.mc_mean = sum / mc_realizations;
        const double var = std::max(0.0, sumsq / mc_realizations - out.mc_mean * out.mc_mean);
        out.mc_stderr = std::sqrt(var / mc_realizations);
    } else if (mc_realizations > 0) {
        out.mc_mean = out.omega_integral;
        out.mc_stderr = 0.0;
    }
    return out;
}

}  // namespace torsionfield
