#pragma once

#include "perpetua/law.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace perpetua {

// Schema:
//   law:   {"family": <name>, "params": {...}}
//   joint: {"coupling": "independent", "M": <law>, "Q": <law>}
//        | {"coupling": "finite_joint", "atoms": [[m, q, prob], ...]}
//
// Families and their params:
//   point_mass {c}          finite_discrete {values, probs}
//   uniform {lo, hi}        uniform_discrete {n}
//   exponential {rate}      gamma {shape, rate}
//   beta {alpha, beta}      weibull {shape, scale}
//   poisson {mean}          inverse_gamma {shape, scale}
//   rademacher {scale}      log_pareto {alpha}
//
// Parse failures throw ConfigError whose path is rooted at `path`.
ScalarLaw law_from_json(const nlohmann::json& doc, const std::string& path);
JointLaw joint_from_json(const nlohmann::json& doc, const std::string& path = "config");

nlohmann::json to_json(const ScalarLaw& law);
nlohmann::json to_json(const JointLaw& joint);

}  // namespace perpetua
