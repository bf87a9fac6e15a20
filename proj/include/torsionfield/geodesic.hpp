#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "torsionfield/connection.hpp"
#include "torsionfield/fields.hpp"
#include "torsionfield/manifold.hpp"
#include "torsionfield/rk4.hpp"

namespace torsionfield {

// Geodesic of the Levi-Civita connection:
//   x''^k + Gamma^k_{ij} x'^i x'^j = 0.
// Trajectories that leave the chart are truncated and flagged.
inline CurvePath geodesic_standard(const ManifoldModel& m, const Vec2& p0, const Vec2& v0,
                                   double duration, double h) {
    m.require_in_domain(p0);
    if (!(h > 0.0)) throw std::invalid_argument("geodesic_standard: step must be positive");

    auto deriv = [&m](double, const RkState<4>& s) {
        const Vec2 x{s[0], s[1]};
        const Vec2 v{s[2], s[3]};
        const Christoffel gamma = christoffel_unchecked(m, x);
        const Vec2 acc = -1.0 * gamma.contract(v, v);
        return RkState<4>{v[0], v[1], acc[0], acc[1]};
    };

    std::vector<CurveSample> samples;
    samples.reserve(static_cast<std::size_t>(duration / h) + 2);
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
        throw std::domain_error("geodesic_standard: trajectory left the chart immediately");
    CurvePath path = curve_from_samples(std::move(samples));
    path.exited_chart = exited;
    return path;
}

// g(gamma', gamma') along an integrator trajectory; conserved for geodesics.
inline std::vector<double> speed_squared_along(const ManifoldModel& m, const CurvePath& path) {
    std::vector<double> out;
    out.reserve(path.samples.size());
    for (const auto& s : path.samples) out.push_back(m.inner(s.pos, s.vel, s.vel));
    return out;
}

}  // namespace torsionfield
