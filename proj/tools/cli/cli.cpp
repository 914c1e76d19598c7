#include "cli.hpp"

#include "perpetua/errors.hpp"
#include "perpetua/law_json.hpp"
#include "perpetua/moments.hpp"
#include "perpetua/oracles.hpp"
#include "perpetua/serialization.hpp"
#include "perpetua/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace perpetua::cli {

using nlohmann::json;

namespace {

struct Flags {
  std::string config_path;
  std::string example;
  std::vector<double> ps;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::uint64_t max_terms = 0;
  std::string out_path;
  bool json_output = false;
  bool check_fixed_point = false;
  CLI::Option* n_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* max_terms_opt = nullptr;
};

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string short_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void apply_overrides(const Flags& f, PerpetuityConfig& config) {
  if (f.seed_opt && f.seed_opt->count() > 0) config.seed = f.seed;
  if (f.epsilon_opt && f.epsilon_opt->count() > 0) config.epsilon = f.epsilon;
  if (f.max_terms_opt && f.max_terms_opt->count() > 0) config.max_terms = f.max_terms;
  validate(config);
}

// Writes to --out when given, otherwise to `out`.
void emit(const Flags& f, std::ostream& out, const std::string& text) {
  if (f.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(f.out_path);
  if (!file) throw ConfigError(f.out_path, "cannot open for writing");
  file << text;
}

json sample_summary(const PerpetuitySampler& sampler, std::uint64_t n, bool check_fixed_point) {
  const BatchOptions opts{worker_cap(), 0};
  const EmpiricalDistribution z = sample_batch(sampler, n, opts);
  json s{{"n", n}, {"provenance", to_json(z.provenance())}};
  if (z.empty()) {
    s["mean"] = nullptr;
    s["variance"] = nullptr;
    s["quantiles"] = json::object();
    s["atoms"] = json::array();
  } else {
    s["mean"] = extended_real(z.mean());
    s["variance"] = extended_real(z.variance());
    json q = json::object();
    for (double level : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99})
      q[short_double(level)] = extended_real(z.quantile(level));
    s["quantiles"] = std::move(q);
    const PurityReport purity = purity_probe(z, std::nullopt, 256.0);
    json atoms = json::array();
    for (const auto& a : purity.atoms) atoms.push_back(to_json(a));
    s["atoms"] = std::move(atoms);
    s["cf_decay"] = {{"value", to_string(purity.cf_decay)}, {"method", purity.method}};
  }
  if (check_fixed_point) {
    s["fixed_point_residual"] =
        n > 0 ? json(fixed_point_residual(sampler.config(), n, opts)) : json(nullptr);
  }
  return s;
}

int cmd_analyze(const Flags& f, std::ostream& out, std::ostream& err) {
  PerpetuityConfig config = load_config(f.config_path);
  apply_overrides(f, config);

  const ExistenceReport existence = existence_report(config.joint);
  json report{{"config", to_json(config.joint)}, {"existence", to_json(existence)}};

  const bool convergent = existence.verdict == Verdict::converges_as;
  json moments = json::array();
  for (double p : f.ps) {
    if (!convergent) {
      moments.push_back({{"p", p},
                         {"refused", "perpetuity is not a.s. convergent with P{M = 0} = 0 (verdict " +
                                         std::string(to_string(existence.verdict)) + ")"}});
      continue;
    }
    try {
      moments.push_back(to_json(p_moment_criterion(config.joint, p)));
    } catch (const PreconditionError& e) {
      moments.push_back({{"p", p}, {"refused", e.what()}});
    }
  }
  report["moments"] = std::move(moments);

  try {
    report["abscissa"] = to_json(r_of_perpetuity(config.joint));
  } catch (const PreconditionError& e) {
    report["abscissa"] = {{"refused", e.what()}};
  }

  int code = kOk;
  report["sample_summary"] = nullptr;
  if (f.n_opt && f.n_opt->count() > 0) {
    try {
      const PerpetuitySampler sampler(config);
      report["sample_summary"] = sample_summary(sampler, f.n, f.check_fixed_point);
    } catch (const NonConvergentError& e) {
      err << "error: " << e.what() << '\n';
      code = kNonConvergent;
    }
  }
  emit(f, out, report.dump(2) + "\n");
  return code;
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream& err) {
  PerpetuityConfig config = load_config(f.config_path);
  apply_overrides(f, config);
  const PerpetuitySampler sampler(config);
  const BatchOptions opts{worker_cap(), 0};
  const auto outcomes = draw_batch(sampler, f.n, opts);

  std::string csv = "z\n";
  csv.reserve(csv.size() + outcomes.size() * 24);
  for (const auto& o : outcomes) {
    csv += format_double(o.value);
    csv += '\n';
  }
  emit(f, out, csv);

  const EmpiricalDistribution z = to_empirical(outcomes, config, opts);
  json summary{{"n", f.n}, {"provenance", to_json(z.provenance())}};
  summary["mean"] = z.empty() ? json(nullptr) : extended_real(z.mean());
  summary["variance"] = z.empty() ? json(nullptr) : extended_real(z.variance());
  if (f.check_fixed_point) {
    summary["fixed_point_residual"] =
        f.n > 0 ? json(fixed_point_residual(config, f.n, opts)) : json(nullptr);
  }
  (f.out_path.empty() ? err : out) << summary.dump(2) << '\n';

  const auto exhausted = z.provenance().exhausted_count;
  if (f.n > 0 && static_cast<double>(exhausted) > 0.01 * static_cast<double>(f.n)) {
    err << "error: " << exhausted << " of " << f.n
        << " samples hit max_terms; raise --max-terms or --epsilon\n";
    return kTruncation;
  }
  return kOk;
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err) {
  if (!is_example(f.example)) {
    err << "error: unknown example '" << f.example << "'; valid names:";
    for (auto name : example_names()) err << ' ' << name;
    err << '\n';
    return kUsage;
  }
  VerifyOptions opts;
  opts.seed = f.seed;
  opts.workers = worker_cap();
  if (f.n_opt && f.n_opt->count() > 0) opts.n = f.n;
  const auto checks = verify_example(f.example, opts);
  const bool pass = all_pass(checks);

  if (f.json_output) {
    json arr = json::array();
    for (const auto& c : checks) arr.push_back(to_json(c));
    emit(f, out, json{{"example", f.example}, {"checks", arr}, {"pass", pass}}.dump(2) + "\n");
  } else {
    std::string text;
    for (const auto& c : checks) {
      const char* cmp = c.compare == Compare::below ? "<" : c.compare == Compare::above ? ">" : "<=";
      text += c.oracle + " | " + c.check + ": " + short_double(c.statistic) + " " + cmp + " " +
              short_double(c.threshold) + "  " + (c.pass ? "PASS" : "FAIL") + "\n";
    }
    text += "verify " + f.example + ": " + (pass ? "pass" : "fail") + "\n";
    emit(f, out, text);
  }
  return pass ? kOk : kVerificationFailed;
}

void add_run_options(CLI::App* sub, Flags& f) {
  f.seed_opt = sub->add_option("--seed", f.seed, "Master seed (overrides the config)");
  f.epsilon_opt = sub->add_option("--epsilon", f.epsilon, "Stop once |Pi_k| <= epsilon");
  f.max_terms_opt = sub->add_option("--max-terms", f.max_terms, "Hard cap on series terms");
  sub->add_option("--out", f.out_path, "Output file");
  sub->add_flag("--check-fixed-point", f.check_fixed_point,
                "Report the two-sample KS residual of Z = Q + M Z");
}

}  // namespace

PerpetuityConfig config_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object");
  PerpetuityConfig config{joint_from_json(doc, path)};
  if (doc.contains("epsilon")) {
    if (!doc["epsilon"].is_number()) throw ConfigError(path + ".epsilon", "expected a number");
    config.epsilon = doc["epsilon"].get<double>();
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
      throw ConfigError(path + ".epsilon", "must lie in (0, 1)");
  }
  if (doc.contains("max_terms")) {
    if (!doc["max_terms"].is_number_unsigned() || doc["max_terms"].get<std::uint64_t>() == 0)
      throw ConfigError(path + ".max_terms", "expected a positive integer");
    config.max_terms = doc["max_terms"].get<std::uint64_t>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      throw ConfigError(path + ".seed", "expected a nonnegative integer");
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  return config;
}

PerpetuityConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file, "cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(doc);
}

unsigned worker_cap() {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PERPETUA_THREADS")) {
    unsigned cap = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && cap > 0)
      workers = std::min(workers, cap);
  }
  return workers;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analyze and simulate perpetuities Z = sum_k M_1...M_{k-1} Q_k", "perpetua"};
  app.require_subcommand(1);
  Flags f;

  auto* analyze = app.add_subcommand("analyze", "Existence, moment and abscissa report (JSON)");
  analyze->add_option("config", f.config_path, "Joint law config (JSON)")->required();
  analyze->add_option("--p", f.ps, "Moment order; repeatable")->allow_extra_args(false);
  f.n_opt = analyze->add_option("--n", f.n, "Also draw n samples and summarize them");
  analyze->add_flag("--json", f.json_output, "JSON output (the default for analyze)");
  add_run_options(analyze, f);

  Flags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Draw samples; CSV plus a JSON summary");
  simulate->add_option("config", sim_flags.config_path, "Joint law config (JSON)")->required();
  sim_flags.n_opt = simulate->add_option("--n", sim_flags.n, "Number of samples")->required();
  simulate->add_flag("--json", sim_flags.json_output, "Accepted for symmetry; the summary is JSON");
  add_run_options(simulate, sim_flags);

  Flags verify_flags;
  auto* verify = app.add_subcommand("verify", "Check a closed-form example against simulation");
  verify->add_option("example", verify_flags.example, "Example name")->required();
  verify_flags.seed_opt = verify->add_option("--seed", verify_flags.seed, "Master seed");
  verify_flags.n_opt = verify->add_option("--n", verify_flags.n, "Sample size");
  verify->add_option("--out", verify_flags.out_path, "Output file");
  verify->add_flag("--json", verify_flags.json_output, "JSON output");

  std::vector<std::string> argv_storage{"perpetua"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(f, out, err);
    if (simulate->parsed()) return cmd_simulate(sim_flags, out, err);
    return cmd_verify(verify_flags, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidLaw& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NonConvergentError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergent;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace perpetua::cli
