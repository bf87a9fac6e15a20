#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "torsionfield/connection.hpp"
#include "torsionfield/fields.hpp"
#include "torsionfield/geodesic.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"
#include "torsionfield/random_field.hpp"
#include "torsionfield/rk4.hpp"
#include "torsionfield/rng.hpp"

namespace torsionfield {

// ---------------------------------------------------------------------------
// Geodesics under the randomized connection.
// ---------------------------------------------------------------------------

// Expectation form: alpha(x) [x'' + Gamma(x', x')] + beta(x, x') x' = 0 with
// alpha = E[eps^2] >= 1 and beta = E[eps deps/dt] evaluated at the current
// state, so the division is always safe.
inline CurvePath expected_geodesic(const ManifoldModel& m, const FieldSpec& spec, const Vec2& p0,
                                   const Vec2& v0, double duration, double h) {
    m.require_in_domain(p0);
    if (!(h > 0.0)) throw std::invalid_argument("expected_geodesic: step must be positive");

    auto deriv = [&](double, const RkState<4>& s) {
        const Vec2 x{s[0], s[1]};
        const Vec2 v{s[2], s[3]};
        const Christoffel gamma = christoffel_unchecked(m, x);
        const AlphaBeta ab = alpha_beta_at(spec, x, v);
        const Vec2 acc = -1.0 * gamma.contract(v, v) - v * (ab.beta / ab.alpha);
        return RkState<4>{v[0], v[1], acc[0], acc[1]};
    };

    std::vector<CurveSample> samples;
    bool exited = false;
    RkState<4> state{p0[0], p0[1], v0[0], v0[1]};
    rk4_integrate<4>(deriv, state, 0.0, duration, h, [&](double t, const RkState<4>& s) {
        const Vec2 x{s[0], s[1]};
        if (!m.domain.contains(x)) {
            exited = true;
            return false;
        }
        samples.push_back({t, x, Vec2{s[2], s[3]}});
        return true;
    });
    if (samples.size() < 2)
        throw std::domain_error("expected_geodesic: trajectory left the chart immediately");
    CurvePath path = curve_from_samples(std::move(samples));
    path.exited_chart = exited;
    return path;
}

// Per-realization form, normalized by eps^2 > 0:
//   x'' + Gamma(x', x') + (d log eps / dt) x' = 0.
// Integration aborts (partial path, flag set) if eps reaches the positivity
// floor along the trajectory.
inline CurvePath realized_geodesic(const ManifoldModel& m, const FieldRealization& r, const Vec2& p0,
                                   const Vec2& v0, double duration, double h) {
    m.require_in_domain(p0);
    if (!(h > 0.0)) throw std::invalid_argument("realized_geodesic: step must be positive");
    r.require_nondegenerate("realized_geodesic");

    auto deriv = [&](double, const RkState<4>& s) {
        const Vec2 x{s[0], s[1]};
        const Vec2 v{s[2], s[3]};
        const Christoffel gamma = christoffel_unchecked(m, x);
        const FieldValue f = r.eval_unchecked(x);
        const double dlog = dot(f.grad, v) / f.eps;
        const Vec2 acc = -1.0 * gamma.contract(v, v) - v * dlog;
        return RkState<4>{v[0], v[1], acc[0], acc[1]};
    };

    std::vector<CurveSample> samples;
    bool exited = false, degenerate = false;
    RkState<4> state{p0[0], p0[1], v0[0], v0[1]};
    rk4_integrate<4>(deriv, state, 0.0, duration, h, [&](double t, const RkState<4>& s) {
        const Vec2 x{s[0], s[1]};
        if (!m.domain.contains(x)) {
            exited = true;
            return false;
        }
        if (r.eval_unchecked(x).eps <= kEpsFloor) {
            degenerate = true;
            return false;
        }
        samples.push_back({t, x, Vec2{s[2], s[3]}});
        return true;
    });
    if (samples.size() < 2)
        throw std::domain_error("realized_geodesic: trajectory left the chart immediately");
    CurvePath path = curve_from_samples(std::move(samples));
    path.exited_chart = exited;
    path.aborted_degenerate = degenerate;
    return path;
}

// ---------------------------------------------------------------------------
// Parallel transport along a fixed curve.
// ---------------------------------------------------------------------------

enum class TransportRegime { standard, expected, realized, brownian_sample, brownian_mean };

struct FrameSample {
    double t = 0.0;
    Vec2 frame;
};

struct TransportSolution {
    CurvePath curve;
    std::vector<FrameSample> frames;
    TransportRegime regime = TransportRegime::standard;
    std::uint64_t seed = 0;
    double step = 0.0;
    bool aborted_degenerate = false;

    const Vec2& start() const { return frames.front().frame; }
    const Vec2& end() const { return frames.back().frame; }
};

namespace detail {

// Shared linear-transport solver: X' = -Gamma(gamma') X - extra(t, p, v) X.
template <class Extra>
TransportSolution transport_solve(const ManifoldModel& m, const CurvePath& curve, const Vec2& v0,
                                  double t_start, double t_end, double h, TransportRegime regime,
                                  Extra&& extra) {
    auto deriv = [&](double t, const RkState<2>& s) {
        const Vec2 x = curve.position(t);
        const Vec2 v = curve.velocity(t);
        const Christoffel gamma = christoffel_unchecked(m, x);
        const Vec2 frame{s[0], s[1]};
        const Vec2 rate = -1.0 * gamma.contract(v, frame) - frame * extra(t, x, v);
        return RkState<2>{rate[0], rate[1]};
    };
    TransportSolution sol;
    sol.curve = curve;
    sol.regime = regime;
    sol.step = h;
    RkState<2> state{v0[0], v0[1]};
    rk4_integrate<2>(deriv, state, t_start, t_end, h, [&](double t, const RkState<2>& s) {
        sol.frames.push_back({t, Vec2{s[0], s[1]}});
        return true;
    });
    return sol;
}

}  // namespace detail

inline TransportSolution standard_transport(const ManifoldModel& m, const CurvePath& curve,
                                            const Vec2& v0, double h) {
    return detail::transport_solve(m, curve, v0, curve.t0, curve.t1, h, TransportRegime::standard,
                                   [](double, const Vec2&, const Vec2&) { return 0.0; });
}

// Expectation transport: alpha X' + alpha Gamma(gamma') X + beta X = 0.
inline TransportSolution expected_transport(const ManifoldModel& m, const FieldSpec& spec,
                                            const CurvePath& curve, const Vec2& v0, double h,
                                            double t_start, double t_end) {
    return detail::transport_solve(m, curve, v0, t_start, t_end, h, TransportRegime::expected,
                                   [&spec](double, const Vec2& x, const Vec2& v) {
                                       const AlphaBeta ab = alpha_beta_at(spec, x, v);
                                       return ab.beta / ab.alpha;
                                   });
}

inline TransportSolution expected_transport(const ManifoldModel& m, const FieldSpec& spec,
                                            const CurvePath& curve, const Vec2& v0, double h) {
    return expected_transport(m, spec, curve, v0, h, curve.t0, curve.t1);
}

// Per-realization transport: X' = -Gamma(gamma') X - (d log eps / dt) X.
inline TransportSolution realized_transport(const ManifoldModel& m, const FieldRealization& r,
                                            const CurvePath& curve, const Vec2& v0, double h) {
    r.require_nondegenerate("realized_transport");
    TransportSolution sol = detail::transport_solve(
        m, curve, v0, curve.t0, curve.t1, h, TransportRegime::realized,
        [&r](double, const Vec2& x, const Vec2& v) {
            const FieldValue f = r.eval_unchecked(x);
            return dot(f.grad, v) / f.eps;
        });
    sol.seed = r.seed();
    return sol;
}

// ---------------------------------------------------------------------------
// Brownian-noise transport: dX = mu dt + sigma dB with mu = -Gamma(gamma') X
// and sigma = -X, driven by a scalar Brownian increment per step.
// Euler-Maruyama with left-point evaluation.
// ---------------------------------------------------------------------------

struct BrownianTransportResult {
    std::vector<TransportSolution> sample_paths;  // first few full paths
    std::vector<Vec2> endpoints;                  // X(t1) for every path
    std::vector<FrameSample> mean_trajectory;
    Vec2 mean_end;
    Vec2 stderr_end;
    std::size_t n_paths = 0;
    std::uint64_t master_seed = 0;
    double step = 0.0;
};

// noise_scale multiplies the Brownian increments; 0 reduces the scheme to
// the forward-Euler solve of the standard transport equation.
inline BrownianTransportResult brownian_transport(const ManifoldModel& m, const CurvePath& curve,
                                                  const Vec2& v0, double h, std::size_t n_paths,
                                                  std::uint64_t master_seed,
                                                  std::size_t keep_paths = 4,
                                                  double noise_scale = 1.0) {
    if (!(h > 0.0)) throw std::invalid_argument("brownian_transport: step must be positive");
    if (n_paths == 0) throw std::invalid_argument("brownian_transport: need at least one path");

    const std::size_t n_steps = static_cast<std::size_t>(std::ceil((curve.t1 - curve.t0) / h));
    const double sqh = std::sqrt(h);

    // precompute curve data at the step grid (left points)
    std::vector<double> times(n_steps + 1);
    std::vector<Christoffel> gammas(n_steps);
    std::vector<Vec2> velocities(n_steps);
    for (std::size_t k = 0; k <= n_steps; ++k)
        times[k] = (k == n_steps) ? curve.t1 : curve.t0 + k * h;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const Vec2 x = curve.position(times[k]);
        gammas[k] = christoffel_unchecked(m, x);
        velocities[k] = curve.velocity(times[k]);
    }

    BrownianTransportResult out;
    out.n_paths = n_paths;
    out.master_seed = master_seed;
    out.step = h;
    out.endpoints.reserve(n_paths);
    std::vector<Vec2> mean_accum(n_steps + 1);

    Vec2 sum_end, sumsq_end;
    for (std::size_t path = 0; path < n_paths; ++path) {
        Rng rng(mix_seed(master_seed, path));
        Vec2 x = v0;
        const bool keep = path < keep_paths;
        TransportSolution sol;
        if (keep) {
            sol.curve = curve;
            sol.regime = TransportRegime::brownian_sample;
            sol.seed = mix_seed(master_seed, path);
            sol.step = h;
            sol.frames.reserve(n_steps + 1);
            sol.frames.push_back({times[0], x});
        }
        mean_accum[0] += x;
        for (std::size_t k = 0; k < n_steps; ++k) {
            const double dt = times[k + 1] - times[k];
            const double db = noise_scale * rng.gaussian() * (dt == h ? sqh : std::sqrt(dt));
            const Vec2 mu = -1.0 * gammas[k].contract(velocities[k], x);
            x = x + mu * dt - x * db;
            mean_accum[k + 1] += x;
            if (keep) sol.frames.push_back({times[k + 1], x});
        }
        if (keep) out.sample_paths.push_back(std::move(sol));
        out.endpoints.push_back(x);
        sum_end += x;
        sumsq_end += Vec2{x[0] * x[0], x[1] * x[1]};
    }

    out.mean_trajectory.reserve(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k)
        out.mean_trajectory.push_back({times[k], mean_accum[k] / static_cast<double>(n_paths)});
    out.mean_end = sum_end / static_cast<double>(n_paths);
    for (int i = 0; i < 2; ++i) {
        const double var =
            std::max(0.0, sumsq_end[i] / n_paths - out.mean_end[i] * out.mean_end[i]);
        out.stderr_end[i] = std::sqrt(var / n_paths);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Holonomy around a closed curve.
// ---------------------------------------------------------------------------

struct Holonomy {
    Mat2 map;            // end-to-start linear map in the g-orthonormal frame
    double angle = 0.0;  // rotation angle in (-pi, pi]
    double log_scale = 0.0;
};

// transport: v0 -> transported vector at curve.t1 under some regime.
inline Holonomy holonomy(const ManifoldModel& m, const CurvePath& curve,
                         const std::function<Vec2(const Vec2&)>& transport) {
    const Vec2 a = m.domain.wrap(curve.position(curve.t0));
    const Vec2 b = m.domain.wrap(curve.position(curve.t1));
    if ((a - b).norm() > 1e-9)
        throw std::invalid_argument("holonomy: curve endpoints do not match in chart coordinates");

    // g-orthonormal frame at the basepoint: columns of g^{-1/2}
    const Mat2 g = m.metric(curve.position(curve.t0));
    const Mat2 frame = sym_sqrt(g).inverse();
    const Vec2 e0{frame(0, 0), frame(1, 0)};
    const Vec2 e1{frame(0, 1), frame(1, 1)};
    const Vec2 f0 = transport(e0);
    const Vec2 f1 = transport(e1);

    // coordinates of the transported frame in the orthonormal frame
    const Mat2 frame_inv = frame.inverse();
    Holonomy h;
    h.map = Mat2{frame_inv(0, 0) * f0[0] + frame_inv(0, 1) * f0[1],
                 frame_inv(0, 0) * f1[0] + frame_inv(0, 1) * f1[1],
                 frame_inv(1, 0) * f0[0] + frame_inv(1, 1) * f0[1],
                 frame_inv(1, 0) * f1[0] + frame_inv(1, 1) * f1[1]};
    h.angle = std::atan2(h.map(1, 0) - h.map(0, 1), h.map(0, 0) + h.map(1, 1));
    h.log_scale = 0.5 * std::log(std::abs(h.map.det()));
    return h;
}

inline Holonomy holonomy_standard(const ManifoldModel& m, const CurvePath& curve, double h) {
    return holonomy(m, curve,
                    [&](const Vec2& v0) { return standard_transport(m, curve, v0, h).end(); });
}

inline Holonomy holonomy_expected(const ManifoldModel& m, const FieldSpec& spec,
                                  const CurvePath& curve, double h) {
    return holonomy(m, curve,
                    [&](const Vec2& v0) { return expected_transport(m, spec, curve, v0, h).end(); });
}

inline Holonomy holonomy_realized(const ManifoldModel& m, const FieldRealization& r,
                                  const CurvePath& curve, double h) {
    return holonomy(m, curve,
                    [&](const Vec2& v0) { return realized_transport(m, r, curve, v0, h).end(); });
}

// ---------------------------------------------------------------------------
// Recovery of the expected derivative from expectation transport:
//   alpha(t) D_{gamma'} X + beta(t) X
//     vs alpha(t) [P(t <- t+dt) X(gamma(t+dt)) - X(gamma(t))] / dt,
// which converges at first order in dt.
// ---------------------------------------------------------------------------

struct RecoveryResult {
    std::vector<double> dts;
    std::vector<double> residuals;
    double fitted_order = 0.0;  // log-log slope of residual vs dt
    Vec2 expected_side;
};

inline RecoveryResult recovery_limit_check(const ManifoldModel& m, const FieldSpec& spec,
                                           const CurvePath& curve, const VectorFieldExpr& x,
                                           double t, const std::vector<double>& dt_sequence,
                                           double solver_step_fraction = 1.0 / 64.0) {
    const Vec2 p = curve.position(t);
    m.require_in_domain(p);
    const AlphaBeta ab = alpha_beta_at(spec, p, curve.velocity(t));
    RecoveryResult out;
    out.expected_side = covariant_derivative_direction(m, curve.velocity(t), x, p) * ab.alpha +
                        x.components(p) * ab.beta;

    for (double dt : dt_sequence) {
        const Vec2 x_ahead = x.components(curve.position(t + dt));
        // transport backwards from t+dt to t
        const TransportSolution back = expected_transport(m, spec, curve, x_ahead,
                                                          dt * solver_step_fraction, t + dt, t);
        const Vec2 quotient = (back.end() - x.components(p)) * (ab.alpha / dt);
        out.dts.push_back(dt);
        out.residuals.push_back((out.expected_side - quotient).norm());
    }

    // least-squares slope in log-log space
    const std::size_t n = out.dts.size();
    if (n >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lx = std::log(out.dts[i]);
            const double ly = std::log(std::max(out.residuals[i], 1e-300));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        out.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return out;
}

}  // namespace torsionfield
