#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsionfield/random_field.hpp"

namespace torsionfield {

// Config problems carry the JSON path of the offending field so the CLI can
// point at it (usage errors exit with code 2).
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), field_path(path) {}
    std::string field_path;
};

struct ExperimentConfig {
    struct Manifold {
        std::string name = "sphere";
        double radius = 1.0;
    } manifold;

    struct Field {
        std::string basis;  // empty: derived from the manifold
        std::size_t truncation = 64;
        double alpha_exp = 3.0;
        double c = 0.1;
    } field;

    struct Integrator {
        double h = 1e-3;
        double duration = 1.0;
    } integrator;

    struct MonteCarlo {
        std::size_t n_samples = 10000;
        std::uint64_t master_seed = 20240101;
        std::string degenerate_policy = "resample-and-report";
    } monte_carlo;

    struct Quadrature {
        int n_theta = 64;
        int n_phi = 128;
    } quadrature;

    struct Output {
        std::string directory = ".";
        std::vector<std::string> formats = {"json", "csv"};
    } output;

    std::string resolved_basis() const {
        if (!field.basis.empty()) return field.basis;
        if (manifold.name == "flat-torus") return "torus-fourier";
        if (manifold.name == "sphere") return "sphere-harmonics";
        return "halfplane-legendre";
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema"] = 1;
        j["manifold"] = {{"name", manifold.name}, {"params", {{"radius", manifold.radius}}}};
        j["field_spec"] = {{"basis", resolved_basis()},
                           {"N", field.truncation},
                           {"alpha_exp", field.alpha_exp},
                           {"c", field.c}};
        j["integrator"] = {{"h", integrator.h}, {"T", integrator.duration}};
        j["monte_carlo"] = {{"n_samples", monte_carlo.n_samples},
                            {"master_seed", monte_carlo.master_seed},
                            {"degenerate_policy", monte_carlo.degenerate_policy}};
        j["quadrature"] = {{"n_theta", quadrature.n_theta}, {"n_phi", quadrature.n_phi}};
        j["output"] = {{"directory", output.directory}, {"formats", output.formats}};
        return j;
    }

    // FNV-1a over the resolved dump; stamped into every output file.
    std::uint64_t hash() const {
        const std::string dump = to_json().dump();
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : dump) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    void validate() const {
        static const std::set<std::string> manifolds{"flat-torus", "sphere", "half-plane"};
        static const std::set<std::string> bases{"", "torus-fourier", "sphere-harmonics",
                                                 "halfplane-legendre"};
        static const std::set<std::string> policies{"abort", "resample-and-report"};
        if (!manifolds.count(manifold.name)) throw ConfigError("manifold.name", "unknown manifold");
        if (!(manifold.radius > 0.0)) throw ConfigError("manifold.params.radius", "must be > 0");
        if (!bases.count(field.basis)) throw ConfigError("field_spec.basis", "unknown basis");
        if (field.truncation < 1) throw ConfigError("field_spec.N", "must be >= 1");
        if (!(field.alpha_exp > 2.0))
            throw ConfigError("field_spec.alpha_exp", "must be > 2 for a twice-differentiable field");
        if (!(field.c >= 0.0)) throw ConfigError("field_spec.c", "must be >= 0");
        if (!(integrator.h > 0.0)) throw ConfigError("integrator.h", "must be > 0");
        if (!(integrator.duration > 0.0)) throw ConfigError("integrator.T", "must be > 0");
        if (monte_carlo.n_samples < 1) throw ConfigError("monte_carlo.n_samples", "must be >= 1");
        if (!policies.count(monte_carlo.degenerate_policy))
            throw ConfigError("monte_carlo.degenerate_policy",
                              "must be 'abort' or 'resample-and-report'");
        if (quadrature.n_theta < 2) throw ConfigError("quadrature.n_theta", "must be >= 2");
        if (quadrature.n_phi < 2) throw ConfigError("quadrature.n_phi", "must be >= 2");
        if (output.directory.empty()) throw ConfigError("output.directory", "must not be empty");
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::string& path,
                                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
}

template <class T>
T get_or(const nlohmann::json& j, const std::string& key, const std::string& path, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(path.empty() ? key : path + "." + key, "wrong type");
    }
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");
    detail::reject_unknown_keys(j, "", {"schema", "manifold", "field_spec", "integrator",
                                        "monte_carlo", "quadrature", "output"});
    ExperimentConfig cfg;
    if (j.contains("schema") && j.at("schema") != 1) throw ConfigError("schema", "expected 1");

    if (j.contains("manifold")) {
        const auto& m = j.at("manifold");
        detail::reject_unknown_keys(m, "manifold", {"name", "params"});
        cfg.manifold.name = detail::get_or<std::string>(m, "name", "manifold", cfg.manifold.name);
        if (m.contains("params")) {
            detail::reject_unknown_keys(m.at("params"), "manifold.params", {"radius"});
            cfg.manifold.radius =
                detail::get_or<double>(m.at("params"), "radius", "manifold.params", cfg.manifold.radius);
        }
    }
    if (j.contains("field_spec")) {
        const auto& f = j.at("field_spec");
        detail::reject_unknown_keys(f, "field_spec", {"basis", "N", "alpha_exp", "c", "seed"});
        cfg.field.basis = detail::get_or<std::string>(f, "basis", "field_spec", cfg.field.basis);
        cfg.field.truncation = detail::get_or<std::size_t>(f, "N", "field_spec", cfg.field.truncation);
        cfg.field.alpha_exp = detail::get_or<double>(f, "alpha_exp", "field_spec", cfg.field.alpha_exp);
        cfg.field.c = detail::get_or<double>(f, "c", "field_spec", cfg.field.c);
        if (f.contains("seed"))
            cfg.monte_carlo.master_seed = detail::get_or<std::uint64_t>(f, "seed", "field_spec", 0);
    }
    if (j.contains("integrator")) {
        const auto& i = j.at("integrator");
        detail::reject_unknown_keys(i, "integrator", {"h", "T"});
        cfg.integrator.h = detail::get_or<double>(i, "h", "integrator", cfg.integrator.h);
        cfg.integrator.duration = detail::get_or<double>(i, "T", "integrator", cfg.integrator.duration);
    }
    if (j.contains("monte_carlo")) {
        const auto& m = j.at("monte_carlo");
        detail::reject_unknown_keys(m, "monte_carlo", {"n_samples", "master_seed", "degenerate_policy"});
        cfg.monte_carlo.n_samples =
            detail::get_or<std::size_t>(m, "n_samples", "monte_carlo", cfg.monte_carlo.n_samples);
        cfg.monte_carlo.master_seed =
            detail::get_or<std::uint64_t>(m, "master_seed", "monte_carlo", cfg.monte_carlo.master_seed);
        cfg.monte_carlo.degenerate_policy = detail::get_or<std::string>(
            m, "degenerate_policy", "monte_carlo", cfg.monte_carlo.degenerate_policy);
    }
    if (j.contains("quadrature")) {
        const auto& q = j.at("quadrature");
        detail::reject_unknown_keys(q, "quadrature", {"n_theta", "n_phi"});
        cfg.quadrature.n_theta = detail::get_or<int>(q, "n_theta", "quadrature", cfg.quadrature.n_theta);
        cfg.quadrature.n_phi = detail::get_or<int>(q, "n_phi", "quadrature", cfg.quadrature.n_phi);
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::reject_unknown_keys(o, "output", {"directory", "formats"});
        cfg.output.directory =
            detail::get_or<std::string>(o, "directory", "output", cfg.output.directory);
        cfg.output.formats =
            detail::get_or<std::vector<std::string>>(o, "formats", "output", cfg.output.formats);
    }
    cfg.validate();
    return cfg;
}

inline DegeneratePolicy parse_policy(const std::string& s) {
    return s == "abort" ? DegeneratePolicy::abort : DegeneratePolicy::resample_and_report;
}

}  // namespace torsionfield
