// Acceptance suite: every top-level guarantee of the toolkit, one pass/fail
// line per criterion, with its tolerance pinned in code. Exit 0 only if all
// criteria hold. The CLI binary path may be passed as argv[1] for the
// byte-determinism criterion; without it that criterion falls back to
// in-process serialization checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "torsionfield/torsionfield.hpp"

using namespace torsionfield;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, const std::string& label, bool pass, const std::string& detail,
            double seconds, double budget_seconds = 0.0) {
    bool ok = pass;
    std::string note = detail;
    if (budget_seconds > 0.0) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2fs of %.0fs budget", seconds, budget_seconds);
        note += std::string(", ") + buf;
        if (seconds > budget_seconds) ok = false;
    }
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, label.c_str(),
                note.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

Vec2 sample_point(const ManifoldModel& m, Rng& rng, double margin = 0.08) {
    Vec2 p;
    for (int i = 0; i < 2; ++i) {
        const auto& ax = m.domain.axis[i];
        const double pad = ax.periodic ? 0.0 : margin * (ax.hi - ax.lo);
        p[i] = ax.lo + pad + (ax.hi - ax.lo - 2 * pad) * rng.uniform01();
    }
    return p;
}

FieldSpec sphere_spec(double c = 0.1, std::size_t n = 16) {
    return make_field_spec(make_sphere(), std::make_shared<SphereHarmonicBasis>(), n, 3.0, c);
}
FieldSpec torus_spec(double c = 0.1, std::size_t n = 16) {
    return make_field_spec(make_flat_torus(), std::make_shared<TorusFourierBasis>(), n, 3.0, c);
}
FieldSpec halfplane_spec(double c = 0.1, std::size_t n = 12) {
    return make_field_spec(make_half_plane(), make_half_plane_basis(), n, 3.0, c);
}

FieldRealization draw(const FieldSpec& spec, std::uint64_t master, std::uint64_t salt) {
    for (;;) {
        FieldRealization r = sample_realization(spec, mix_seed(master, salt));
        if (!r.degenerate()) return r;
        ++salt;
    }
}

VectorFieldExpr trig_field(Rng& rng, double amplitude = 0.6) {
    struct Term {
        double c0, c1, a, b, u, w;
    };
    Term t[2];
    for (auto& q : t) {
        q.c0 = amplitude * (2.0 * rng.uniform01() - 1.0);
        q.c1 = amplitude * (2.0 * rng.uniform01() - 1.0);
        q.a = 1.0 + std::floor(2.0 * rng.uniform01());
        q.b = 1.0 + std::floor(2.0 * rng.uniform01());
        q.u = 6.28 * rng.uniform01();
        q.w = 6.28 * rng.uniform01();
    }
    VectorFieldExpr f;
    f.components = [t](const Vec2& p) {
        Vec2 out;
        for (int k = 0; k < 2; ++k)
            out[k] = t[k].c0 + t[k].c1 * std::sin(t[k].a * p[0] + t[k].u) * std::cos(t[k].b * p[1] + t[k].w);
        return out;
    };
    f.jacobian = [t](const Vec2& p) {
        Mat2 j;
        for (int k = 0; k < 2; ++k) {
            j(k, 0) = t[k].c1 * t[k].a * std::cos(t[k].a * p[0] + t[k].u) * std::cos(t[k].b * p[1] + t[k].w);
            j(k, 1) = -t[k].c1 * t[k].b * std::sin(t[k].a * p[0] + t[k].u) * std::sin(t[k].b * p[1] + t[k].w);
        }
        return j;
    };
    f.second_partials = [t](const Vec2& p) {
        std::array<Mat2, 2> h;
        for (int k = 0; k < 2; ++k) {
            const double s = std::sin(t[k].a * p[0] + t[k].u), c = std::cos(t[k].a * p[0] + t[k].u);
            const double sy = std::sin(t[k].b * p[1] + t[k].w), cy = std::cos(t[k].b * p[1] + t[k].w);
            h[k](0, 0) = -t[k].c1 * t[k].a * t[k].a * s * cy;
            h[k](0, 1) = -t[k].c1 * t[k].a * t[k].b * c * sy;
            h[k](1, 0) = h[k](0, 1);
            h[k](1, 1) = -t[k].c1 * t[k].b * t[k].b * s * cy;
        }
        return h;
    };
    return f;
}

ScalarFieldExpr trig_scalar(Rng& rng, double amplitude = 0.5) {
    const double c0 = 1.0 + amplitude * (2.0 * rng.uniform01() - 1.0);
    const double c1 = amplitude * (2.0 * rng.uniform01() - 1.0);
    const double a = 1.0 + std::floor(2.0 * rng.uniform01());
    const double b = 1.0 + std::floor(2.0 * rng.uniform01());
    const double u = 6.28 * rng.uniform01(), w = 6.28 * rng.uniform01();
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

// --- criteria ---------------------------------------------------------------

void criterion_1_sectional() {
    Timer timer;
    double worst = 0.0;
    int samples = 0;
    Rng rng(101);
    for (const FieldSpec& spec : {sphere_spec(), halfplane_spec()}) {
        const auto& m = *spec.manifold;
        for (int i = 0; i < 60; ++i) {
            const FieldRealization r = draw(spec, 11, i);
            const Vec2 p = sample_point(m, rng);
            Vec2 u{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0};
            Vec2 v{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0};
            if (std::abs(u[0] * v[1] - u[1] * v[0]) < 1e-3) v[0] += 1.0;
            const SectionalPair k = stochastic_sectional(m, r, p, u, v);
            worst = std::max(worst, std::abs(k.randomized - k.classical));
            ++samples;
        }
    }
    report(1, "sectional curvature invariance |K~ - K| <= 1e-9", worst <= 1e-9,
           "max " + fmt(worst) + " over " + std::to_string(samples) + " samples", timer.seconds(),
           10.0);
}

void criterion_2_curvature_scaling() {
    Timer timer;
    double worst_up = 0.0, worst_low = 0.0;
    Rng rng(102);
    int samples = 0;
    for (const FieldSpec& spec : {sphere_spec(), halfplane_spec(), torus_spec()}) {
        const auto& m = *spec.manifold;
        for (int i = 0; i < 34; ++i) {
            const FieldRealization r = draw(spec, 22, i);
            const Vec2 p = sample_point(m, rng);
            const RiemannUp direct = stochastic_curvature_at(m, r, p, CurvatureMethod::direct);
            const RiemannUp scaled = stochastic_curvature_at(m, r, p, CurvatureMethod::scaled);
            worst_up = std::max(worst_up, direct.max_abs_diff(scaled));
            const StochasticRiemann4 s4 = stochastic_riemann_4tensor(m, r, p);
            const double eps = r.eval_unchecked(p).eps;
            const RiemannLow expect = curvature_at(m, p).low * (eps * eps * eps * eps);
            worst_low = std::max(worst_low, s4.tensor.max_abs_diff(expect));
            ++samples;
        }
    }
    report(2, "curvature scaling: nested evaluation vs eps^3 / eps^4 tensors <= 1e-6",
           worst_up <= 1e-6 && worst_low <= 1e-6,
           "operator " + fmt(worst_up) + ", 4-tensor " + fmt(worst_low) + ", " +
               std::to_string(samples) + " samples",
           timer.seconds(), 30.0);
}

void criterion_3_torsion() {
    Timer timer;
    double worst_vanish = 0.0, worst_bracket = 0.0;
    Rng rng(103);
    for (int i = 0; i < 100; ++i) {
        const FieldSpec& spec = (i % 2 == 0) ? sphere_spec() : torus_spec();
        const auto& m = *spec.manifold;
        const FieldRealization r = draw(spec, 33, i);
        const Vec2 p = sample_point(m, rng);
        const TorsionResult t = stochastic_torsion(m, r, trig_field(rng), trig_field(rng), p);
        worst_vanish = std::max(worst_vanish, t.randomized.norm());
        worst_bracket =
            std::max(worst_bracket, (t.deterministic - t.predicted_deterministic).norm());
    }
    report(3, "stochastic torsion: ||T~|| <= 1e-6 and bracket residual matches closed form",
           worst_vanish <= 1e-6 && worst_bracket <= 1e-6,
           "T~ " + fmt(worst_vanish) + ", bracket " + fmt(worst_bracket) + ", 100 samples",
           timer.seconds());
}

void criterion_4_connection_axioms() {
    Timer timer;
    double worst_axioms = 0.0, worst_compat = 0.0;
    Rng rng(104);
    const double scalars[3] = {-1.0, 0.0, 2.5};
    for (int i = 0; i < 100; ++i) {
        const FieldSpec& spec = (i % 2 == 0) ? sphere_spec() : torus_spec();
        const auto& m = *spec.manifold;
        const FieldRealization r = draw(spec, 44, i);
        const Vec2 p = sample_point(m, rng);
        const ConnectionAxiomResiduals res = connection_axiom_residuals(
            m, r, trig_scalar(rng), trig_field(rng), trig_field(rng), trig_field(rng),
            scalars[i % 3], p);
        worst_axioms = std::max(worst_axioms, res.max());
        const MetricCompatibilityResiduals mc =
            metric_compatibility_residuals(m, r, trig_field(rng), trig_field(rng), trig_field(rng), p);
        worst_compat = std::max(worst_compat, std::max(mc.randomized, mc.prediction_error));
    }
    report(4, "connection axioms (additivity, linearity, leibniz, compatibility) <= 1e-8",
           worst_axioms <= 1e-8 && worst_compat <= 1e-8,
           "axioms " + fmt(worst_axioms) + ", compatibility " + fmt(worst_compat) + ", 100 each",
           timer.seconds());
}

void criterion_5_transport_scaling() {
    Timer timer;
    double worst_realized = 0.0;
    {
        const FieldSpec spec = sphere_spec(0.1);
        const auto& m = *spec.manifold;
        const FieldRealization r = draw(spec, 55, 0);
        const CurvePath lat = sphere_latitude_curve(kPi / 3.0);
        const Vec2 v0{0.6, 0.25};
        const TransportSolution sol = realized_transport(m, r, lat, v0, 1e-4);
        const TransportSolution std_sol = standard_transport(m, lat, v0, 1e-4);
        const double eps0 = r.eval_unchecked(lat.position(lat.t0)).eps;
        for (std::size_t i = 0; i < sol.frames.size(); i += 499) {
            const double epst = r.eval_unchecked(lat.position(sol.frames[i].t)).eps;
            worst_realized = std::max(
                worst_realized, (sol.frames[i].frame - std_sol.frames[i].frame * (eps0 / epst)).norm());
        }
    }
    {
        const FieldSpec spec = torus_spec(0.15);
        const auto& m = *spec.manifold;
        const FieldRealization r = draw(spec, 56, 0);
        const CurvePath line = line_curve({0.5, 1.7}, {1.0, 0.3}, 0.0, 3.0);
        const Vec2 v0{0.2, 0.9};
        const TransportSolution sol = realized_transport(m, r, line, v0, 1e-4);
        const double eps0 = r.eval_unchecked(line.position(0.0)).eps;
        for (std::size_t i = 0; i < sol.frames.size(); i += 499) {
            const double epst = r.eval_unchecked(line.position(sol.frames[i].t)).eps;
            worst_realized = std::max(worst_realized, (sol.frames[i].frame - v0 * (eps0 / epst)).norm());
        }
    }
    double worst_expected = 0.0;
    {
        const FieldSpec spec = sphere_spec(0.12);
        const auto& m = *spec.manifold;
        const CurvePath lat = sphere_latitude_curve(1.1);
        const Vec2 v0{0.5, 0.3};
        const Vec2 got = expected_transport(m, spec, lat, v0, 1e-4).end();
        const Vec2 std_end = standard_transport(m, lat, v0, 1e-4).end();
        const double integral = integrate_time(
            [&](double t) {
                const AlphaBeta ab = alpha_beta_along(spec, lat, t);
                return ab.beta / ab.alpha;
            },
            lat.t0, lat.t1, 128, 8);
        worst_expected = (got - std_end * std::exp(-integral)).norm();
        const double ratio = std::sqrt(m.inner(lat.position(lat.t1), got, got) /
                                       m.inner(lat.position(lat.t1), std_end, std_end));
        worst_expected = std::max(worst_expected, std::abs(ratio - std::exp(-integral)));
    }
    report(5, "transport scaling: realized eps ratio and expected exp(-int beta/alpha) <= 1e-6",
           worst_realized <= 1e-6 && worst_expected <= 1e-6,
           "realized " + fmt(worst_realized) + ", expected " + fmt(worst_expected), timer.seconds());
}

void criterion_6_holonomy() {
    Timer timer;
    const auto sphere = make_sphere();
    const CurvePath lat = sphere_latitude_curve(kPi / 3.0);
    const Holonomy h = holonomy_standard(*sphere, lat, 1e-4);
    const double err = std::abs(std::abs(h.angle) - kPi);
    report(6, "classical holonomy: latitude pi/3 rotation angle = pi within 1e-5", err <= 1e-5,
           "error " + fmt(err), timer.seconds(), 5.0);
}

void criterion_7_brownian_mean() {
    Timer timer;
    const auto sphere = make_sphere();
    const CurvePath lat = sphere_latitude_curve(kPi / 3.0, 1.0, 0.0, kPi);
    const Vec2 v0{0.8, 0.3};
    const BrownianTransportResult res =
        brownian_transport(*sphere, lat, v0, 1e-3 * lat.duration(), 10000, 777);
    const Vec2 std_end = standard_transport(*sphere, lat, v0, 1e-4).end();
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        worst = std::max(worst, std::abs(res.mean_end[i] - std_end[i]) / (3.0 * res.stderr_end[i]));
    report(7, "brownian transport mean within 3 standard errors of standard transport", worst <= 1.0,
           "max component distance " + fmt(worst) + " (in 3-SE units), 10000 paths",
           timer.seconds(), 60.0);
}

void criterion_8_gauss_bonnet() {
    Timer timer;
    FieldSpec quiet = sphere_spec(0.0);
    const GaussBonnetReport clean = gauss_bonnet_deviation(*quiet.manifold, quiet, {}, 0);
    const bool euler_ok = std::abs(clean.omega_integral - 2.0) <= 1e-6;

    const FieldSpec noisy_spec = sphere_spec(0.1, 16);
    const GaussBonnetReport noisy =
        gauss_bonnet_deviation(*noisy_spec.manifold, noisy_spec, {}, 200, 424242);
    const bool closed_ok = std::abs(noisy.deviation - noisy.closed_form_deviation) <=
                           noisy.refinement_delta + 1e-9;
    const bool mc_ok =
        std::abs(noisy.mc_mean - noisy.expected_omega_integral) <= 3.0 * noisy.mc_stderr;

    const FieldSpec flat = torus_spec(0.1);
    const GaussBonnetReport torus = gauss_bonnet_deviation(*flat.manifold, flat, {}, 20);
    const bool flat_ok = std::abs(torus.deviation) <= 1e-12;

    report(8, "gauss-bonnet: integral = chi at c=0; deviation matches closed form and monte carlo",
           euler_ok && closed_ok && mc_ok && flat_ok,
           "integral err " + fmt(std::abs(clean.omega_integral - 2.0)) + ", closed-form gap " +
               fmt(std::abs(noisy.deviation - noisy.closed_form_deviation)) + ", mc gap " +
               fmt(std::abs(noisy.mc_mean - noisy.expected_omega_integral)) + " (3SE " +
               fmt(3.0 * noisy.mc_stderr) + "), torus " + fmt(std::abs(torus.deviation)),
           timer.seconds());
}

void criterion_9_laplacian() {
    Timer timer;
    double worst = 0.0;
    Rng rng(109);
    for (int i = 0; i < 100; ++i) {
        const FieldSpec& spec = (i % 2 == 0) ? sphere_spec() : torus_spec();
        const auto& m = *spec.manifold;
        const FieldRealization r = draw(spec, 99, i);
        const Vec2 p = sample_point(m, rng);
        const ScalarFieldExpr f = trig_scalar(rng);
        const VectorFieldExpr x = trig_field(rng);

        const double eps = r.eval_unchecked(p).eps;
        const Vec2 grad_tilde = stochastic_gradient(m, r, f, p);
        worst = std::max(worst, (grad_tilde - gradient(m, f, p) * eps).norm());
        worst = std::max(worst, std::abs(stochastic_divergence(m, r, x, p, LaplaceRoute::formula) -
                                         stochastic_divergence(m, r, x, p, LaplaceRoute::composed)));
        worst = std::max(worst, std::abs(stochastic_laplacian(m, r, f, p, LaplaceRoute::formula) -
                                         stochastic_laplacian(m, r, f, p, LaplaceRoute::composed)));
    }

    Rng rng2(110);
    const BoundedDomain band = make_spherical_band();
    FieldSpec band_spec = sphere_spec(0.12);
    band_spec.manifold = band.manifold;
    const DivergenceTheoremReport d1 =
        divergence_theorem_check(band, draw(band_spec, 111, 0), trig_field(rng2));
    const BoundedDomain strip = make_torus_strip();
    const DivergenceTheoremReport d2 =
        divergence_theorem_check(strip, draw(torus_spec(0.12), 112, 0), trig_field(rng2));

    report(9, "laplacian identities <= 1e-8; divergence theorem residual <= 1e-5",
           worst <= 1e-8 && d1.residual <= 1e-5 && d2.residual <= 1e-5,
           "two-sided " + fmt(worst) + ", band " + fmt(d1.residual) + ", strip " + fmt(d2.residual),
           timer.seconds());
}

void criterion_10_moments() {
    Timer timer;
    const FieldSpec spec = torus_spec(0.1, 16);
    const Vec2 p{1.0, 2.0};
    const MonteCarloMoments mc = monte_carlo_moments(spec, p, 10000, 2024);
    const double v = field_variance(spec, p);
    const bool mean_ok = std::abs(mc.mean[0] - 1.0) <= 3.0 * mc.stderr_[0];
    const bool second_ok = std::abs(mc.mean[1] - (1.0 + v)) <= 3.0 * mc.stderr_[1];

    double worst_ab = 0.0;
    const CurvePath diag = line_curve({0.2, 0.4}, {1.0, 0.7}, 0.0, 4.0);
    for (double t = 0.1; t < 4.0; t += 0.21) {
        const AlphaBeta ab = alpha_beta_along(spec, diag, t);
        worst_ab = std::max(worst_ab,
                            std::abs(ab.alpha - 1.0 - field_variance(spec, diag.position(t))));
    }
    report(10, "moment contracts: E[eps]=1, E[eps^2]=1+V (3 SE); alpha-1 = V <= 1e-10",
           mean_ok && second_ok && worst_ab <= 1e-10,
           "mean gap " + fmt(std::abs(mc.mean[0] - 1.0)) + ", second gap " +
               fmt(std::abs(mc.mean[1] - 1.0 - v)) + ", alpha-V " + fmt(worst_ab),
           timer.seconds());
}

void criterion_11_solver_quality() {
    Timer timer;
    const FieldSpec spec = sphere_spec(0.1);
    const auto& m = *spec.manifold;

    auto geo_end = [&](double h) {
        return expected_geodesic(m, spec, {kPi / 2.2, 0.4}, {0.25, 0.6}, 1.2, h).samples.back().pos;
    };
    const Vec2 geo_ref = geo_end(0.0025);
    const double geo_order =
        std::log2((geo_end(0.04) - geo_ref).norm() / (geo_end(0.02) - geo_ref).norm());

    const CurvePath arc = sphere_latitude_curve(1.0, 1.0, 0.0, 3.0);
    auto tr_end = [&](double h) { return expected_transport(m, spec, arc, {0.3, 0.7}, h).end(); };
    const Vec2 tr_ref = tr_end(0.0025);
    const double tr_order =
        std::log2((tr_end(0.04) - tr_ref).norm() / (tr_end(0.02) - tr_ref).norm());

    Rng rng(111);
    const FieldSpec tspec = torus_spec(0.1);
    const CurvePath line = line_curve({1.3, 0.4}, {0.5, 0.9}, 0.0, 2.0);
    const RecoveryResult rec = recovery_limit_check(*tspec.manifold, tspec, line, trig_field(rng),
                                                    0.7, {1e-2, 3e-3, 1e-3, 3e-4, 1e-4});

    const bool order_ok = std::abs(geo_order - 4.0) <= 0.3 && std::abs(tr_order - 4.0) <= 0.3;
    const bool rec_ok = std::abs(rec.fitted_order - 1.0) <= 0.15;
    report(11, "solver quality: order-4 integrators (log2 ratio 4 +/- 0.3), recovery order 1 +/- 0.15",
           order_ok && rec_ok,
           "geodesic " + fmt(geo_order) + ", transport " + fmt(tr_order) + ", recovery " +
               fmt(rec.fitted_order),
           timer.seconds());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_12_determinism(const char* cli_path) {
    Timer timer;
    bool ok = true;
    std::string detail;
    if (cli_path != nullptr) {
        const std::string base = "/tmp/torsionfield_acceptance";
        if (std::system(("rm -rf " + base).c_str()) != 0) {
            report(12, "determinism: identical config produces byte-identical outputs", false,
                   "could not clear scratch directory", timer.seconds());
            return;
        }
        for (const char* run : {"a", "b"}) {
            const std::string cmd = std::string(cli_path) +
                                    " sample-field --manifold flat-torus --seed 7 --output " + base +
                                    "/s" + run + " >/dev/null 2>&1 && " + cli_path +
                                    " geodesic realized --manifold sphere --c 0.1 --seed 3 --T 0.5 "
                                    "--output " +
                                    base + "/g" + run + " >/dev/null 2>&1 && " + cli_path +
                                    " gauss-bonnet --manifold sphere --c 0.05 --N 8 --n-theta 16 "
                                    "--n-phi 32 --output " +
                                    base + "/q" + run + " >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                detail = "cli invocation failed";
            }
        }
        if (ok) {
            for (const char* pair : {"s", "g", "q"}) {
                const std::string pa = base + "/" + pair + "a", pb = base + "/" + pair + "b";
                for (const std::string& file :
                     {std::string("resolved_config.json"), std::string("field_realization.json"),
                      std::string("geodesic_realized.csv"), std::string("geodesic_realized.json"),
                      std::string("gauss_bonnet.json")}) {
                    const std::string fa = pa + "/" + file, fb = pb + "/" + file;
                    std::ifstream ta(fa);
                    if (!ta.good()) continue;  // file belongs to a different subcommand
                    if (slurp(fa) != slurp(fb)) {
                        ok = false;
                        detail = "byte mismatch in " + file;
                    }
                }
            }
            if (ok) detail = "cli outputs byte-identical across reruns";
        }
    } else {
        // no CLI path given: compare in-process serializations
        ExperimentConfig cfg;
        cfg.field.truncation = 8;
        cfg.monte_carlo.n_samples = 500;
        cfg.quadrature.n_theta = 16;
        cfg.quadrature.n_phi = 32;
        const std::string a = run_verify(cfg).to_json().dump();
        const std::string b = run_verify(cfg).to_json().dump();
        ok = (a == b);
        detail = "suite report serialization identical across reruns";
    }
    report(12, "determinism: identical config produces byte-identical outputs", ok, detail,
           timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli_path = (argc > 1) ? argv[1] : nullptr;
    std::printf("acceptance suite (12 criteria)\n");
    criterion_1_sectional();
    criterion_2_curvature_scaling();
    criterion_3_torsion();
    criterion_4_connection_axioms();
    criterion_5_transport_scaling();
    criterion_6_holonomy();
    criterion_7_brownian_mean();
    criterion_8_gauss_bonnet();
    criterion_9_laplacian();
    criterion_10_moments();
    criterion_11_solver_quality();
    criterion_12_determinism(cli_path);
    std::printf("acceptance: %d/12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
