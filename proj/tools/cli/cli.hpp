#pragma once

#include "perpetua/sampler.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace perpetua::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kNonConvergent = 3,
  kTruncation = 4,
};

// A config document is a joint law object with optional top-level
// "epsilon", "max_terms" and "seed".
PerpetuityConfig config_from_json(const nlohmann::json& doc, const std::string& path = "config");
PerpetuityConfig load_config(const std::string& file);

// Worker count for batch sampling, capped by PERPETUA_THREADS when set.
unsigned worker_cap();

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perpetua::cli
