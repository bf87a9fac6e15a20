#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionfield/basis.hpp"
#include "torsionfield/fields.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"
#include "torsionfield/quadrature.hpp"
#include "torsionfield/rng.hpp"

namespace torsionfield {

// Realizations whose minimum over the validation grid falls at or below this
// floor are flagged degenerate; operations that divide by the field value
// refuse them. No silent clamping.
inline constexpr double kEpsFloor = 0.05;

// What Monte Carlo drivers do when a draw comes out degenerate. Resampling
// keeps runs alive but biases the ensemble slightly; every driver reports the
// number of replaced draws.
enum class DegeneratePolicy { abort, resample_and_report };

// Law of the random function eps = 1 + sum_i X_i psi_i with independent
// X_i ~ N(0, sigma_i^2), sigma_i^2 = c * i^(-alpha). alpha > 2 keeps the
// (untruncated) field twice differentiable almost surely; the truncated
// field used here is analytic either way.
struct FieldSpec {
    ManifoldPtr manifold;
    BasisPtr basis;
    std::size_t truncation = 64;
    double decay_exponent = 3.0;
    double amplitude = 0.1;

    double sigma2(std::size_t i) const {  // 1-based
        return amplitude * std::pow(static_cast<double>(i), -decay_exponent);
    }
};

inline FieldSpec make_field_spec(ManifoldPtr manifold, BasisPtr basis, std::size_t truncation,
                                 double decay_exponent, double amplitude) {
    if (!manifold) throw std::invalid_argument("field_spec.manifold: required");
    if (!basis) throw std::invalid_argument("field_spec.basis: required");
    if (truncation < 1) throw std::invalid_argument("field_spec.N: must be >= 1");
    if (truncation > basis->max_size())
        throw std::invalid_argument("field_spec.N: exceeds basis size " +
                                    std::to_string(basis->max_size()));
    if (!(decay_exponent > 2.0))
        throw std::invalid_argument("field_spec.alpha_exp: must be > 2 (got " +
                                    std::to_string(decay_exponent) + ")");
    if (!(amplitude >= 0.0)) throw std::invalid_argument("field_spec.c: must be >= 0");
    return FieldSpec{std::move(manifold), std::move(basis), truncation, decay_exponent, amplitude};
}

// Value, gradient and hessian of one realized field at a point.
struct FieldValue {
    double eps = 1.0;
    Vec2 grad;
    Mat2 hess;
};

class FieldRealization {
public:
    FieldRealization(FieldSpec spec, std::vector<double> coefficients, std::uint64_t seed)
        : spec_(std::move(spec)), coeffs_(std::move(coefficients)), seed_(seed) {
        compute_min_eps();
    }

    const FieldSpec& spec() const { return spec_; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    std::uint64_t seed() const { return seed_; }
    double min_eps() const { return min_eps_; }
    bool degenerate() const { return min_eps_ <= kEpsFloor; }

    void require_nondegenerate(const std::string& op) const {
        if (degenerate())
            throw std::runtime_error(op + ": realization is degenerate (min eps = " +
                                     std::to_string(min_eps_) + " <= floor " +
                                     std::to_string(kEpsFloor) + "), seed " + std::to_string(seed_));
    }

    FieldValue eval(const Vec2& p) const {
        spec_.manifold->require_in_domain(p);
        return eval_unchecked(p);
    }

    FieldValue eval_unchecked(const Vec2& p) const {
        BasisEval be;
        spec_.basis->evaluate(p, coeffs_.size(), be);
        FieldValue out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            out.eps += coeffs_[i] * be.value[i];
            out.grad += be.grad[i] * coeffs_[i];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) out.hess(a, b) += coeffs_[i] * be.hess[i](a, b);
        }
        return out;
    }

    double value(const Vec2& p) const { return eval_unchecked(p).eps; }

    // d/dt eps(gamma(t)) for a point with velocity v.
    double time_derivative(const Vec2& p, const Vec2& v) const {
        return dot(eval_unchecked(p).grad, v);
    }

private:
    void compute_min_eps() {
        const ChartDomain& dom = spec_.manifold->domain;
        const int n = 64;
        std::vector<double> values(coeffs_.size());
        double lo = 1e300;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double u = dom.axis[0].lo + dom.span(0) * (i + 0.5) / n;
                const double w = dom.axis[1].lo + dom.span(1) * (j + 0.5) / n;
                spec_.basis->evaluate_values(Vec2{u, w}, coeffs_.size(), values.data());
                double eps = 1.0;
                for (std::size_t k = 0; k < coeffs_.size(); ++k) eps += coeffs_[k] * values[k];
                lo = std::min(lo, eps);
            }
        min_eps_ = lo;
    }

    FieldSpec spec_;
    std::vector<double> coeffs_;
    std::uint64_t seed_;
    double min_eps_ = 1.0;
};

// Draw one realization. Deterministic function of (spec, seed): coefficient i
// is sqrt(sigma_i^2) times the i-th Gaussian of the splitmix64 stream.
inline FieldRealization sample_realization(const FieldSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> coeffs(spec.truncation);
    for (std::size_t i = 0; i < spec.truncation; ++i)
        coeffs[i] = std::sqrt(spec.sigma2(i + 1)) * rng.gaussian();
    return FieldRealization(spec, std::move(coeffs), seed);
}

// The exactly-noiseless field (eps == 1): amplitude forced to zero.
inline FieldRealization noiseless_realization(FieldSpec spec) {
    spec.amplitude = 0.0;
    return sample_realization(spec, 0);
}

// Pointwise variance V(p) = sum_i sigma_i^2 psi_i(p)^2.
inline double field_variance(const FieldSpec& spec, const Vec2& p) {
    BasisEval be;
    spec.basis->evaluate(p, spec.truncation, be);
    double v = 0.0;
    for (std::size_t i = 0; i < spec.truncation; ++i)
        v += spec.sigma2(i + 1) * be.value[i] * be.value[i];
    return v;
}

// Closed-form moments of eps(p) = 1 + G, G ~ N(0, V(p)):
// E[eps] = 1, E[eps^2] = 1+V, E[eps^3] = 1+3V, E[eps^4] = 1+6V+3V^2.
struct FieldMoments {
    double m1 = 1.0, m2 = 1.0, m3 = 1.0, m4 = 1.0;
};

inline FieldMoments field_moments(const FieldSpec& spec, const Vec2& p) {
    const double v = field_variance(spec, p);
    return {1.0, 1.0 + v, 1.0 + 3.0 * v, 1.0 + 6.0 * v + 3.0 * v * v};
}

// Expected-field coefficients along a curve:
//   alpha(t) = E[eps^2](gamma(t)) = 1 + V(gamma(t))
//   beta(t)  = E[eps deps/dt]     = sum_i sigma_i^2 psi_i <grad psi_i, gamma'>
// so beta = (1/2) d/dt alpha along the curve.
struct AlphaBeta {
    double alpha = 1.0;
    double beta = 0.0;
};

inline AlphaBeta alpha_beta_at(const FieldSpec& spec, const Vec2& p, const Vec2& v) {
    BasisEval be;
    spec.basis->evaluate(p, spec.truncation, be);
    AlphaBeta out;
    for (std::size_t i = 0; i < spec.truncation; ++i) {
        const double s2 = spec.sigma2(i + 1);
        out.alpha += s2 * be.value[i] * be.value[i];
        out.beta += s2 * be.value[i] * dot(be.grad[i], v);
    }
    return out;
}

inline AlphaBeta alpha_beta_along(const FieldSpec& spec, const CurvePath& curve, double t) {
    const Vec2 p = curve.position(t);
    spec.manifold->require_in_domain(p);
    return alpha_beta_at(spec, p, curve.velocity(t));
}

// Monte Carlo estimate of the first four moments of eps(p). The basis is
// evaluated once at p; each sample then reduces to a dot product with a fresh
// coefficient draw (seed i derived as mix_seed(master_seed, i)). Means come
// with standard errors; reductions run in index order, so results are a pure
// function of (spec, p, n, master_seed).
struct MonteCarloMoments {
    double mean[4]{};
    double stderr_[4]{};
    std::size_t n_samples = 0;
};

inline MonteCarloMoments monte_carlo_moments(const FieldSpec& spec, const Vec2& p,
                                             std::size_t n_samples, std::uint64_t master_seed) {
    std::vector<double> psi(spec.truncation);
    spec.basis->evaluate_values(p, spec.truncation, psi.data());
    std::vector<double> sigma(spec.truncation);
    for (std::size_t i = 0; i < spec.truncation; ++i) sigma[i] = std::sqrt(spec.sigma2(i + 1));

    double sum[4]{}, sumsq[4]{};
    for (std::size_t s = 0; s < n_samples; ++s) {
        Rng rng(mix_seed(master_seed, s));
        double eps = 1.0;
        for (std::size_t i = 0; i < spec.truncation; ++i) eps += sigma[i] * rng.gaussian() * psi[i];
        double power = 1.0;
        for (int k = 0; k < 4; ++k) {
            power *= eps;
            sum[k] += power;
            sumsq[k] += power * power;
        }
    }
    MonteCarloMoments out;
    out.n_samples = n_samples;
    for (int k = 0; k < 4; ++k) {
        out.mean[k] = sum[k] / n_samples;
        const double var = std::max(0.0, sumsq[k] / n_samples - out.mean[k] * out.mean[k]);
        out.stderr_[k] = std::sqrt(var / n_samples);
    }
    return out;
}

// Gram matrix of the first n basis functions under quadrature. For the
// sphere the integral runs over the whole surface (the harmonics are globally
// orthonormal; only the geometric chart is pole-free).
inline std::vector<std::vector<double>> basis_gram_matrix(const FieldSpec& spec, std::size_t n,
                                                          const QuadratureGrid& grid = {128, 128}) {
    const ManifoldModel& m = *spec.manifold;
    double lo0 = m.domain.axis[0].lo, hi0 = m.domain.axis[0].hi;
    if (m.name == "sphere") {
        lo0 = 0.0;
        hi0 = std::numbers::pi;
    }
    const detail::AxisNodes a0 = detail::axis_nodes(
        m.name == "sphere" ? detail::AxisRuleKind::sphere_cos
        : m.domain.axis[0].periodic ? detail::AxisRuleKind::periodic_full
                                    : detail::AxisRuleKind::gl,
        lo0, hi0, grid.n0);
    const detail::AxisNodes a1 =
        detail::axis_nodes(m.domain.axis[1].periodic ? detail::AxisRuleKind::periodic_full
                                                     : detail::AxisRuleKind::gl,
                           m.domain.axis[1].lo, m.domain.axis[1].hi, grid.n1);

    std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
    BasisEval be;
    for (std::size_t i = 0; i < a0.x.size(); ++i)
        for (std::size_t j = 0; j < a1.x.size(); ++j) {
            const Vec2 p{a0.x[i], a1.x[j]};
            double weight = std::sqrt(m.metric(p).det());
            if (m.name == "sphere") weight /= std::sin(p[0]);
            weight *= a0.w[i] * a1.w[j];
            spec.basis->evaluate(p, n, be);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = r; c < n; ++c) gram[r][c] += weight * be.value[r] * be.value[c];
        }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < r; ++c) gram[r][c] = gram[c][r];
    return gram;
}

inline double basis_gram_residual(const FieldSpec& spec, std::size_t n,
                                  const QuadratureGrid& grid = {128, 128}) {
    const auto gram = basis_gram_matrix(spec, n, grid);
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            worst = std::max(worst, std::abs(gram[r][c] - (r == c ? 1.0 : 0.0)));
    return worst;
}

}  // namespace torsionfield
