// torsionfield: command-line driver for the stochastic-geometry toolkit.
//
// Subcommands map onto the library operations: verify (the full identity
// suite), sample-field, geodesic, transport, curvature, gauss-bonnet,
// laplacian, divergence-theorem. Every run re-emits the fully resolved
// config next to its results, and all outputs are stamped with the config
// hash and master seed so reruns can be diffed byte for byte.
//
// Exit codes: 0 success, 1 failed check or degenerate abort, 2 usage/config.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torsionfield/torsionfield.hpp"

namespace tf = torsionfield;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << content;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

json stamp(const tf::ExperimentConfig& cfg) {
    return json{{"schema", 1},
                {"config_hash", cfg.hash()},
                {"master_seed", cfg.monte_carlo.master_seed}};
}

// curve used by the transport and holonomy subcommands: a latitude circle on
// the sphere, a closed coordinate line on the flat torus
tf::CurvePath closed_loop(const tf::ExperimentConfig& cfg, double latitude) {
    if (cfg.manifold.name == "sphere") return tf::sphere_latitude_curve(latitude);
    if (cfg.manifold.name == "flat-torus")
        return tf::line_curve({0.0, latitude}, {1.0, 0.0}, 0.0, 2.0 * kPi);
    throw tf::ConfigError("manifold.name", "transport loops need a sphere or flat torus");
}

tf::FieldSpec field_spec_from(const tf::ExperimentConfig& cfg) {
    return tf::make_field_spec(tf::make_manifold(cfg.manifold.name, cfg.manifold.radius),
                               tf::make_basis(cfg.resolved_basis(), cfg.manifold.radius),
                               cfg.field.truncation, cfg.field.alpha_exp, cfg.field.c);
}

tf::FieldRealization draw_realization(const tf::FieldSpec& spec, const tf::ExperimentConfig& cfg,
                                      const std::filesystem::path& outdir, int* resampled = nullptr) {
    std::uint64_t salt = 0;
    for (;;) {
        tf::FieldRealization r =
            tf::sample_realization(spec, tf::mix_seed(cfg.monte_carlo.master_seed, salt));
        if (!r.degenerate()) return r;
        if (cfg.monte_carlo.degenerate_policy == "abort") {
            // dump the offending draw so the run can be replayed
            json dump = stamp(cfg);
            dump["seed"] = r.seed();
            dump["coefficients"] = r.coefficients();
            dump["min_eps"] = r.min_eps();
            dump["degenerate"] = true;
            write_json_file(outdir / "degenerate_realization.json", dump);
            throw std::runtime_error("degenerate realization (min eps = " +
                                     std::to_string(r.min_eps()) + ", seed " +
                                     std::to_string(r.seed()) +
                                     ") under policy abort; dumped for replay");
        }
        if (resampled) ++(*resampled);
        ++salt;
    }
}

std::string trajectory_csv(const tf::CurvePath& path, const tf::FieldRealization* field) {
    std::string csv = field ? "t,x0,x1,v0,v1,eps\n" : "t,x0,x1,v0,v1\n";
    for (const auto& s : path.samples) {
        csv += format_double(s.t) + "," + format_double(s.pos[0]) + "," + format_double(s.pos[1]) +
               "," + format_double(s.vel[0]) + "," + format_double(s.vel[1]);
        if (field) csv += "," + format_double(field->eval_unchecked(s.pos).eps);
        csv += "\n";
    }
    return csv;
}

std::string frames_csv(const std::vector<tf::FrameSample>& frames, const tf::CurvePath& curve) {
    std::string csv = "t,x0,x1,frame0,frame1\n";
    for (const auto& f : frames) {
        const tf::Vec2 p = curve.position(f.t);
        csv += format_double(f.t) + "," + format_double(p[0]) + "," + format_double(p[1]) + "," +
               format_double(f.frame[0]) + "," + format_double(f.frame[1]) + "\n";
    }
    return csv;
}

int run_verify_cmd(const tf::ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    const tf::VerificationSuiteReport report = tf::run_verify(cfg);
    json j = report.to_json();
    j["config_hash"] = cfg.hash();
    write_json_file(outdir / "verify_report.json", j);
    write_text_file(outdir / "verify_report.txt", report.to_text());
    std::cout << report.to_text();
    return report.all_passing() ? 0 : 1;
}

int run_sample_field(const tf::ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    const tf::FieldSpec spec = field_spec_from(cfg);
    const tf::FieldRealization r = tf::sample_realization(spec, cfg.monte_carlo.master_seed);
    json j = stamp(cfg);
    j["basis"] = spec.basis->name();
    j["N"] = spec.truncation;
    j["seed"] = r.seed();
    j["coefficients"] = r.coefficients();
    j["min_eps"] = r.min_eps();
    j["degenerate"] = r.degenerate();
    write_json_file(outdir / "field_realization.json", j);
    std::cout << "sampled " << spec.truncation << " coefficients, min eps " << r.min_eps()
              << (r.degenerate() ? " (degenerate)" : "") << "\n";
    return 0;
}

int run_geodesic(const tf::ExperimentConfig& cfg, const std::filesystem::path& outdir,
                 const std::string& variant, tf::Vec2 p0, tf::Vec2 v0) {
    const auto manifold = tf::make_manifold(cfg.manifold.name, cfg.manifold.radius);
    const double h = cfg.integrator.h, duration = cfg.integrator.duration;

    tf::CurvePath path;
    std::optional<tf::FieldRealization> realization;
    if (variant == "standard") {
        path = tf::geodesic_standard(*manifold, p0, v0, duration, h);
    } else if (variant == "expected") {
        path = tf::expected_geodesic(*manifold, field_spec_from(cfg), p0, v0, duration, h);
    } else if (variant == "realized") {
        const tf::FieldSpec spec = field_spec_from(cfg);
        int resampled = 0;
        realization = draw_realization(spec, cfg, outdir, &resampled);
        path = tf::realized_geodesic(*manifold, *realization, p0, v0, duration, h);
        if (resampled > 0)
            std::cerr << "note: resampled " << resampled << " degenerate realization(s)\n";
    } else {
        throw tf::ConfigError("variant", "expected standard|expected|realized");
    }

    write_text_file(outdir / ("geodesic_" + variant + ".csv"),
                    trajectory_csv(path, realization ? &*realization : nullptr));
    json j = stamp(cfg);
    j["variant"] = variant;
    j["p0"] = {p0[0], p0[1]};
    j["v0"] = {v0[0], v0[1]};
    j["t_end"] = path.t1;
    j["end_position"] = {path.samples.back().pos[0], path.samples.back().pos[1]};
    j["end_velocity"] = {path.samples.back().vel[0], path.samples.back().vel[1]};
    j["exited_chart"] = path.exited_chart;
    j["aborted_degenerate"] = path.aborted_degenerate;
    write_json_file(outdir / ("geodesic_" + variant + ".json"), j);
    std::cout << "geodesic " << variant << " end: (" << path.samples.back().pos[0] << ", "
              << path.samples.back().pos[1] << ")\n";
    return path.aborted_degenerate ? 1 : 0;
}

int run_transport(const tf::ExperimentConfig& cfg, const std::filesystem::path& outdir,
                  const std::string& variant, double latitude, tf::Vec2 v0, std::size_t n_paths) {
    const auto manifold = tf::make_manifold(cfg.manifold.name, cfg.manifold.radius);
    const tf::CurvePath loop = closed_loop(cfg, latitude);
    const double h = cfg.integrator.h;

    json j = stamp(cfg);
    j["variant"] = variant;
    j["latitude"] = latitude;
    j["v0"] = {v0[0], v0[1]};

    if (variant == "expected") {
        const tf::FieldSpec spec = field_spec_from(cfg);
        const tf::TransportSolution sol = tf::expected_transport(*manifold, spec, loop, v0, h);
        const tf::Holonomy hol = tf::holonomy_expected(*manifold, spec, loop, h);
        write_text_file(outdir / "transport_expected.csv", frames_csv(sol.frames, loop));
        j["end_frame"] = {sol.end()[0], sol.end()[1]};
        j["holonomy_angle"] = hol.angle;
        j["holonomy_log_scale"] = hol.log_scale;
    } else if (variant == "realized") {
        const tf::FieldSpec spec = field_spec_from(cfg);
        int resampled = 0;
        const tf::FieldRealization r = draw_realization(spec, cfg, outdir, &resampled);
        const tf::TransportSolution sol = tf::realized_transport(*manifold, r, loop, v0, h);
        const tf::Holonomy hol = tf::holonomy_realized(*manifold, r, loop, h);
        write_text_file(outdir / "transport_realized.csv", frames_csv(sol.frames, loop));
        j["end_frame"] = {sol.end()[0], sol.end()[1]};
        j["holonomy_angle"] = hol.angle;
        j["holonomy_log_scale"] = hol.log_scale;
        j["realization_seed"] = r.seed();
        j["resampled"] = resampled;
    } else if (variant == "brownian") {
        const tf::BrownianTransportResult res = tf::brownian_transport(
            *manifold, loop, v0, cfg.integrator.h, n_paths, cfg.monte_carlo.master_seed);
        write_text_file(outdir / "transport_brownian_mean.csv",
                        frames_csv(res.mean_trajectory, loop));
        for (std::size_t i = 0; i < res.sample_paths.size(); ++i)
            write_text_file(outdir / ("transport_brownian_path" + std::to_string(i) + ".csv"),
                            frames_csv(res.sample_paths[i].frames, loop));
        j["mean_end"] = {res.mean_end[0], res.mean_end[1]};
        j["stderr_end"] = {res.stderr_end[0], res.stderr_end[1]};
        j["n_paths"] = res.n_paths;
    } else {
        throw tf::ConfigError("variant", "expected expected|realized|brownian");
    }
    write_json_file(outdir / ("transport_" + variant + ".json"), j);
    if (j.contains("holonomy_angle"))
        std::cout << "holonomy angle " << j["holonomy_angle"].get<double>() << "\n";
    else
        std::cout << "mean end frame (" << j["mean_end"][0].get<double>() << ", "
                  << j["mean_end"][1].get<double>() << ")\n";
    return 0;
}

int run_curvature(const tf::ExperimentConfig& cfg, const std::filesystem::path& outdir, tf::Vec2 p) {
    const tf::FieldSpec spec = field_spec_from(cfg);
    const auto& m = *spec.manifold;
    int resampled = 0;
    const tf::FieldRealization r = draw_realization(spec, cfg, outdir, &resampled);

    const tf::RiemannUp direct = tf::stochastic_curvature_at(m, r, p, tf::CurvatureMethod::direct);
    const tf::RiemannUp scaled = tf::stochastic_curvature_at(m, r, p, tf::CurvatureMethod::scaled);
    const tf::StochasticRiemann4 s4 = tf::stochastic_riemann_4tensor(m, r, p);
    const tf::SectionalPair k = tf::stochastic_sectional(m, r, p, {1.0, 0.0}, {0.0, 1.0});
    const tf::StochasticRicciScalar rs = tf::stochastic_ricci_scalar(m, r, p);

    json j = stamp(cfg);
    j["point"] = {p[0], p[1]};
    j["realization_seed"] = r.seed();
    j["resampled"] = resampled;
    j["eps"] = rs.eps;
    auto up_to_json = [](const tf::RiemannUp& u) {
        json arr = json::array();
        for (int l = 0; l < 2; ++l)
            for (int kk = 0; kk < 2; ++kk)
                for (int i = 0; i < 2; ++i)
                    for (int jj = 0; jj < 2; ++jj) arr.push_back(u(l, kk, i, jj));
        return arr;
    };
    j["curvature_direct"] = up_to_json(direct);
    j["curvature_scaled"] = up_to_json(scaled);
    j["direct_vs_scaled_max_diff"] = direct.max_abs_diff(scaled);
    j["symmetry_residuals"] = {{"skew_first", s4.residuals.skew_first},
                               {"skew_last", s4.residuals.skew_last},
                               {"exchange", s4.residuals.exchange},
                               {"bianchi1", s4.residuals.bianchi1}};
    j["sectional"] = {{"randomized", k.randomized}, {"classical", k.classical}};
    j["ricci"] = {{"randomized", {rs.ricci(0, 0), rs.ricci(0, 1), rs.ricci(1, 0), rs.ricci(1, 1)}},
                  {"classical",
                   {rs.classical_ricci(0, 0), rs.classical_ricci(0, 1), rs.classical_ricci(1, 0),
                    rs.classical_ricci(1, 1)}}};
    j["scalar"] = {{"randomized", rs.scalar}, {"classical", rs.classical_scalar}};
    write_json_file(outdir / "curvature_report.json", j);
    std::cout << "sectional randomized " << k.randomized << " classical " << k.classical << "\n";
    return 0;
}

int run_gauss_bonnet(const tf::ExperimentConfig& cfg, const std::filesystem::path& outdir,
                     std::size_t mc_realizations) {
    const tf::FieldSpec spec = field_spec_from(cfg);
    const tf::QuadratureGrid grid{cfg.quadrature.n_theta, cfg.quadrature.n_phi};
    const tf::GaussBonnetReport rep = tf::gauss_bonnet_deviation(
        *spec.manifold, spec, grid, mc_realizations, cfg.monte_carlo.master_seed,
        tf::parse_policy(cfg.monte_carlo.degenerate_policy));
    json j = stamp(cfg);
    j["integral"] = rep.omega_integral;
    j["chi"] = rep.chi;
    j["expected_integral"] = rep.expected_omega_integral;
    j["deviation"] = rep.deviation;
    j["closed_form_deviation"] = rep.closed_form_deviation;
    j["refinement_delta"] = rep.refinement_delta;
    j["cap_v_bound"] = rep.cap_v_bound;
    j["monte_carlo"] = {{"mean", rep.mc_mean},
                        {"stderr", rep.mc_stderr},
                        {"n_realizations", rep.mc_realizations},
                        {"seed", rep.mc_seed},
                        {"resampled", rep.mc_resampled}};
    write_json_file(outdir / "gauss_bonnet.json", j);
    std::cout << "integral " << rep.omega_integral << " chi " << rep.chi << " deviation "
              << rep.deviation << "\n";
    return 0;
}

int run_laplacian(const tf::ExperimentConfig& cfg, const std::filesystem::path& outdir, tf::Vec2 p) {
    const tf::FieldSpec spec = field_spec_from(cfg);
    const auto& m = *spec.manifold;
    int resampled = 0;
    const tf::FieldRealization r = draw_realization(spec, cfg, outdir, &resampled);

    // reference scalar: f = sin(x0) cos(x1)
    tf::ScalarFieldExpr f{
        [](const tf::Vec2& q) { return std::sin(q[0]) * std::cos(q[1]); },
        [](const tf::Vec2& q) {
            return tf::Vec2{std::cos(q[0]) * std::cos(q[1]), -std::sin(q[0]) * std::sin(q[1])};
        },
        [](const tf::Vec2& q) {
            tf::Mat2 h;
            h(0, 0) = -std::sin(q[0]) * std::cos(q[1]);
            h(0, 1) = -std::cos(q[0]) * std::sin(q[1]);
            h(1, 0) = h(0, 1);
            h(1, 1) = -std::sin(q[0]) * std::cos(q[1]);
            return h;
        }};
    const tf::Vec2 grad_tilde = tf::stochastic_gradient(m, r, f, p);
    const double lap_formula = tf::stochastic_laplacian(m, r, f, p, tf::LaplaceRoute::formula);
    const double lap_composed = tf::stochastic_laplacian(m, r, f, p, tf::LaplaceRoute::composed);

    json j = stamp(cfg);
    j["point"] = {p[0], p[1]};
    j["realization_seed"] = r.seed();
    j["gradient"] = {grad_tilde[0], grad_tilde[1]};
    j["laplacian_formula"] = lap_formula;
    j["laplacian_composed"] = lap_composed;
    j["route_difference"] = std::abs(lap_formula - lap_composed);
    write_json_file(outdir / "laplacian.json", j);
    std::cout << "laplacian " << lap_formula << " (route difference "
              << std::abs(lap_formula - lap_composed) << ")\n";
    return 0;
}

int run_divergence_theorem(const tf::ExperimentConfig& cfg, const std::filesystem::path& outdir,
                           const std::string& domain_name) {
    tf::BoundedDomain domain;
    tf::FieldSpec spec = field_spec_from(cfg);
    if (domain_name == "spherical-band") {
        domain = tf::make_spherical_band(0.3, kPi / 2.0, cfg.manifold.radius);
        if (cfg.manifold.name != "sphere")
            throw tf::ConfigError("manifold.name", "spherical-band needs manifold sphere");
    } else if (domain_name == "torus-strip") {
        domain = tf::make_torus_strip();
        if (cfg.manifold.name != "flat-torus")
            throw tf::ConfigError("manifold.name", "torus-strip needs manifold flat-torus");
    } else {
        throw tf::ConfigError("domain", "expected spherical-band|torus-strip");
    }
    int resampled = 0;
    const tf::FieldRealization r = draw_realization(spec, cfg, outdir, &resampled);

    // reference field with analytic partials
    tf::VectorFieldExpr x{
        [](const tf::Vec2& q) {
            return tf::Vec2{0.3 + 0.2 * std::sin(q[1]), 0.5 * std::cos(q[0])};
        },
        [](const tf::Vec2& q) {
            return tf::Mat2{0.0, 0.2 * std::cos(q[1]), -0.5 * std::sin(q[0]), 0.0};
        },
        nullptr};
    const tf::QuadratureGrid grid{cfg.quadrature.n_theta, cfg.quadrature.n_phi};
    const tf::DivergenceTheoremReport rep = tf::divergence_theorem_check(domain, r, x, grid);

    json j = stamp(cfg);
    j["domain"] = domain_name;
    j["lhs"] = rep.volume_integral;
    j["rhs"] = rep.boundary_integral;
    j["residual"] = rep.residual;
    j["volume_refinement"] = rep.volume_refinement;
    j["grid"] = {{"n_theta", grid.n0}, {"n_phi", grid.n1}};
    j["seed"] = r.seed();
    write_json_file(outdir / "divergence_theorem.json", j);
    std::cout << "lhs " << rep.volume_integral << " rhs " << rep.boundary_integral << " residual "
              << rep.residual << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"torsionfield: randomized vector fields on 2-D Riemannian charts"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_path, output_dir, manifold_name, basis_name, policy;
    double radius = -1.0, alpha_exp = -1.0, c_amp = -1.0, step = -1.0, duration = -1.0;
    std::int64_t truncation = -1, n_samples = -1, n_theta = -1, n_phi = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--output", output_dir, "output directory (default: env TORSIONFIELD_OUTPUT_DIR or config)");
    app.add_option("--manifold", manifold_name, "flat-torus | sphere | half-plane");
    app.add_option("--radius", radius, "sphere radius");
    app.add_option("--basis", basis_name, "torus-fourier | sphere-harmonics | halfplane-legendre");
    app.add_option("--N", truncation, "field truncation");
    app.add_option("--alpha-exp", alpha_exp, "variance decay exponent (> 2)");
    app.add_option("--c", c_amp, "field amplitude (>= 0)");
    app.add_option_function<std::uint64_t>(
           "--seed", [&](std::uint64_t v) { seed = v; seed_set = true; }, "master seed");
    app.add_option("--step", step, "integrator step");
    app.add_option("--T", duration, "integration duration");
    app.add_option("--n-samples", n_samples, "monte carlo sample count");
    app.add_option("--policy", policy, "degenerate policy: abort | resample-and-report");
    app.add_option("--n-theta", n_theta, "quadrature nodes, first axis");
    app.add_option("--n-phi", n_phi, "quadrature nodes, second axis");

    auto* cmd_verify = app.add_subcommand("verify", "run the full identity suite");
    auto* cmd_sample = app.add_subcommand("sample-field", "draw one field realization");

    std::string geo_variant = "standard";
    std::vector<double> p0{1.0472, 0.3}, v0{0.4, 0.8};
    auto* cmd_geodesic = app.add_subcommand("geodesic", "integrate a geodesic");
    cmd_geodesic->add_option("variant", geo_variant, "standard | expected | realized");
    cmd_geodesic->add_option("--p0", p0, "start point")->expected(2);
    cmd_geodesic->add_option("--v0", v0, "start velocity")->expected(2);

    std::string tr_variant = "expected";
    double latitude = 1.0472;
    std::vector<double> tv0{1.0, 0.0};
    std::int64_t n_paths = 10000;
    auto* cmd_transport = app.add_subcommand("transport", "parallel transport around a closed loop");
    cmd_transport->add_option("variant", tr_variant, "expected | realized | brownian");
    cmd_transport->add_option("--latitude", latitude,
                              "sphere latitude theta0 (or torus line height)");
    cmd_transport->add_option("--v0", tv0, "initial frame vector")->expected(2);
    cmd_transport->add_option("--n-paths", n_paths, "brownian path count");

    std::vector<double> point{1.0472, 0.7};
    auto* cmd_curvature = app.add_subcommand("curvature", "randomized curvature report at a point");
    cmd_curvature->add_option("--point", point, "chart point")->expected(2);

    std::int64_t mc_realizations = 200;
    auto* cmd_gb = app.add_subcommand("gauss-bonnet", "curvature-form integral and deviation");
    cmd_gb->add_option("--realizations", mc_realizations, "monte carlo realization count");

    std::vector<double> lap_point{1.0472, 0.7};
    auto* cmd_lap = app.add_subcommand("laplacian", "randomized laplacian at a point");
    cmd_lap->add_option("--point", lap_point, "chart point")->expected(2);

    std::string domain_name = "spherical-band";
    auto* cmd_div = app.add_subcommand("divergence-theorem", "volume vs boundary integral check");
    cmd_div->add_option("--domain", domain_name, "spherical-band | torus-strip");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        tf::ExperimentConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "config error: cannot open " << config_path << "\n";
                return 2;
            }
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            }
            cfg = tf::config_from_json(j);
        }
        if (!manifold_name.empty()) cfg.manifold.name = manifold_name;
        if (radius > 0.0) cfg.manifold.radius = radius;
        if (!basis_name.empty()) cfg.field.basis = basis_name;
        if (truncation >= 0) cfg.field.truncation = static_cast<std::size_t>(truncation);
        if (alpha_exp >= 0.0) cfg.field.alpha_exp = alpha_exp;
        if (c_amp >= 0.0) cfg.field.c = c_amp;
        if (seed_set) cfg.monte_carlo.master_seed = seed;
        if (step > 0.0) cfg.integrator.h = step;
        if (duration > 0.0) cfg.integrator.duration = duration;
        if (n_samples > 0) cfg.monte_carlo.n_samples = static_cast<std::size_t>(n_samples);
        if (!policy.empty()) cfg.monte_carlo.degenerate_policy = policy;
        if (n_theta > 0) cfg.quadrature.n_theta = static_cast<int>(n_theta);
        if (n_phi > 0) cfg.quadrature.n_phi = static_cast<int>(n_phi);
        cfg.validate();

        std::filesystem::path outdir = cfg.output.directory;
        if (const char* env = std::getenv("TORSIONFIELD_OUTPUT_DIR"); env && *env) outdir = env;
        if (!output_dir.empty()) outdir = output_dir;
        std::filesystem::create_directories(outdir);
        write_json_file(outdir / "resolved_config.json", cfg.to_json());

        if (cmd_verify->parsed()) return run_verify_cmd(cfg, outdir);
        if (cmd_sample->parsed()) return run_sample_field(cfg, outdir);
        if (cmd_geodesic->parsed())
            return run_geodesic(cfg, outdir, geo_variant, {p0[0], p0[1]}, {v0[0], v0[1]});
        if (cmd_transport->parsed())
            return run_transport(cfg, outdir, tr_variant, latitude, {tv0[0], tv0[1]},
                                 static_cast<std::size_t>(n_paths));
        if (cmd_curvature->parsed()) return run_curvature(cfg, outdir, {point[0], point[1]});
        if (cmd_gb->parsed())
            return run_gauss_bonnet(cfg, outdir, static_cast<std::size_t>(mc_realizations));
        if (cmd_lap->parsed()) return run_laplacian(cfg, outdir, {lap_point[0], lap_point[1]});
        if (cmd_div->parsed()) return run_divergence_theorem(cfg, outdir, domain_name);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const tf::ConfigError& e) {
        std::cerr << "config error at " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
