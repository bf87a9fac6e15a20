#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsionfield/linalg.hpp"

namespace torsionfield {

// Residual record of one verified identity at a sample point. Reports with
// asserting == false are evaluated and published but never gate a run.
struct IdentityReport {
    std::string identity_id;
    Vec2 point;
    std::uint64_t seed = 0;
    std::vector<double> lhs;
    std::vector<double> rhs;
    double residual_norm = 0.0;
    double tolerance = 0.0;
    bool asserting = true;
    bool pass = true;
    std::string note;

    void finalize() { pass = !asserting || residual_norm <= tolerance; }
};

inline nlohmann::json to_json(const IdentityReport& r) {
    nlohmann::json j;
    j["identity_id"] = r.identity_id;
    j["point"] = {r.point[0], r.point[1]};
    j["seed"] = r.seed;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["residual_norm"] = r.residual_norm;
    j["tolerance"] = r.tolerance;
    j["asserting"] = r.asserting;
    j["pass"] = r.pass;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace torsionfield
