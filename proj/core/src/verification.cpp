#include "perpetua/verification.hpp"

#include "perpetua/errors.hpp"
#include "perpetua/moments.hpp"
#include "perpetua/sampler.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace perpetua {

namespace {

constexpr std::array<std::string_view, 8> kExamples = {
    "geometric", "uniform-digits", "uniform-symmetric", "gamma",
    "levy-half", "pitman-yor",     "exp-moments",       "abscissa-boundary",
};

BatchOptions batch(const VerifyOptions& o) { return {o.workers, 0}; }

EmpiricalDistribution draw(const OracleSpec& oracle, const VerifyOptions& o) {
  PerpetuityConfig config{*oracle.config};
  config.seed = o.seed;
  return sample_batch(config, o.n, batch(o));
}

std::vector<CheckResult> verify_geometric(const VerifyOptions& o) {
  const OracleSpec oracle = oracle_geometric(0.3);
  const EmpiricalDistribution z = draw(oracle, o);
  const Provenance& prov = z.provenance();
  const auto not_exact = static_cast<double>(prov.truncated_count + prov.exhausted_count);
  const ChiSquare chi = chi_square_gof(z, oracle.pmf);
  return {
      make_check(oracle.name, "non-exact samples", oracle.params, not_exact, 0.0, Compare::at_most),
      make_check(oracle.name, "total variation", oracle.params, tv_distance_pmf(z, oracle.pmf), 0.01,
                 Compare::below),
      make_check(oracle.name, "chi-square p-value", oracle.params, chi.p_value, 0.01, Compare::above),
  };
}

std::vector<CheckResult> verify_uniform_digits(const VerifyOptions& o) {
  const OracleSpec oracle = oracle_uniform_digits(2);
  const EmpiricalDistribution z = draw(oracle, o);
  return {make_check(oracle.name, "ks", oracle.params, ks_distance(z, oracle.cdf), 0.01,
                     Compare::below)};
}

std::vector<CheckResult> verify_uniform_symmetric(const VerifyOptions& o) {
  const OracleSpec oracle = oracle_uniform_symmetric();
  const EmpiricalDistribution z = draw(oracle, o);
  std::vector<double> ts;
  for (int i = 1; i <= 200; ++i) ts.push_back(0.5 * i);
  const auto cf = [](double t) { return std::sin(2.0 * t) / (2.0 * t); };
  return {
      make_check(oracle.name, "ks", oracle.params, ks_distance(z, oracle.cdf), 0.01, Compare::below),
      make_check(oracle.name, "cf deviation on [0.5, 100]", oracle.params, cf_deviation(z, cf, ts),
                 0.02, Compare::below),
  };
}

std::vector<CheckResult> verify_gamma(const VerifyOptions& o) {
  const OracleSpec oracle = oracle_gamma_sizebias(1.0);
  const EmpiricalDistribution z = draw(oracle, o);
  const double se = std::sqrt(z.variance() / static_cast<double>(z.size()));
  return {
      make_check(oracle.name, "ks", oracle.params, ks_distance(z, oracle.cdf), 0.01, Compare::below),
      make_check(oracle.name, "|mean - 2| / se", oracle.params, std::fabs(z.mean() - 2.0) / se, 3.0,
                 Compare::below),
  };
}

std::vector<CheckResult> verify_levy_half(const VerifyOptions& o) {
  const double b = 1.0;
  const double grid[] = {0.5, 1.0, 2.0};
  std::vector<CheckResult> out;
  out.push_back(make_check("levy-half", "Q Laplace transform", {{"b", b}},
                           levy_half_q_check(b, grid), kLevyQTolerance, Compare::below));
  if (!out.back().pass) return out;
  const OracleSpec oracle = oracle_levy_half(b);
  const EmpiricalDistribution z = draw(oracle, o);
  out.push_back(
      make_check(oracle.name, "ks", oracle.params, ks_distance(z, oracle.cdf), 0.015, Compare::below));
  return out;
}

std::vector<CheckResult> verify_pitman_yor() {
  const double grid[] = {0.5, 1.0, 2.0};
  return {make_check("pitman-yor-lt", "identity deviation", {}, oracle_pitman_yor_identity(grid),
                     1e-6, Compare::below)};
}

std::vector<CheckResult> verify_exp_moments(const VerifyOptions& o) {
  const ScalarLaw law_m = ScalarLaw::uniform(0.0, 1.0);
  PerpetuityConfig config{JointLaw::independent(law_m, ScalarLaw::exponential(1.0))};
  config.seed = o.seed;
  const EmpiricalDistribution z =
      sample_batch(config, std::max<std::uint64_t>(o.n, 1'000'000), batch(o));
  std::vector<CheckResult> out;
  for (unsigned k = 1; k <= 3; ++k) {
    const double exact = exp_example_moment(1.0, law_m, k);
    const double empirical = empirical_moment(z, k, false);
    out.push_back(make_check("exp-moments", "E Z^" + std::to_string(k) + " relative error",
                             {{"a", 1.0}, {"n", static_cast<double>(k)}}, std::fabs(empirical - exact) / exact, 0.05,
                             Compare::below));
  }
  return out;
}

std::vector<CheckResult> verify_abscissa_boundary() {
  const JointLaw joint = JointLaw::independent(ScalarLaw::finite_discrete({1.0, 0.5}, {0.5, 0.5}),
                                               ScalarLaw::exponential(2.0));
  return {make_check("abscissa-boundary", "|r_star - 1|", {{"a", 2.0}, {"theta", 0.5}},
                     std::fabs(r_star(joint) - 1.0), 1e-6, Compare::below)};
}

}  // namespace

CheckResult make_check(std::string oracle, std::string check, std::map<std::string, double> params,
                       double statistic, double threshold, Compare compare) {
  CheckResult r{std::move(oracle), std::move(check), std::move(params), statistic, threshold,
                compare, false};
  switch (compare) {
    case Compare::below: r.pass = statistic < threshold; break;
    case Compare::above: r.pass = statistic > threshold; break;
    case Compare::at_most: r.pass = statistic <= threshold; break;
  }
  return r;
}

double tv_distance_pmf(const EmpiricalDistribution& emp, const std::function<double(double)>& pmf) {
  if (emp.empty()) throw PreconditionError("tv_distance_pmf: empty sample");
  const auto s = emp.samples();
  const double n = static_cast<double>(s.size());
  double abs_diff = 0.0;
  double covered = 0.0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double p = s[i] == std::floor(s[i]) ? pmf(s[i]) : 0.0;
    abs_diff += std::fabs(static_cast<double>(j - i) / n - p);
    covered += p;
    i = j;
  }
  return 0.5 * (abs_diff + std::max(0.0, 1.0 - covered));
}

ChiSquare chi_square_gof(const EmpiricalDistribution& emp, const std::function<double(double)>& pmf,
                         double k_min, double min_expected) {
  if (emp.empty()) throw PreconditionError("chi_square_gof: empty sample");
  const double n = static_cast<double>(emp.size());
  std::vector<double> expected;
  std::vector<double> observed;
  double mass = 0.0;
  for (double k = k_min;; k += 1.0) {
    const double e = n * pmf(k);
    if (e < min_expected) break;
    expected.push_back(e);
    observed.push_back(n * (emp.cdf(k) - emp.cdf(k - 1.0)));
    mass += e;
  }
  if (expected.empty()) throw PreconditionError("chi_square_gof: no bin reaches min_expected");
  const double tail_expected = n - mass;
  const double tail_observed = n - std::accumulate(observed.begin(), observed.end(), 0.0);
  if (tail_expected >= min_expected) {
    expected.push_back(tail_expected);
    observed.push_back(tail_observed);
  } else {
    expected.back() += tail_expected;
    observed.back() += tail_observed;
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  const unsigned dof = static_cast<unsigned>(expected.size()) - 1;
  const double p = dof == 0 ? 1.0 : boost::math::gamma_q(0.5 * dof, 0.5 * stat);
  return {stat, dof, p};
}

double cf_deviation(const EmpiricalDistribution& emp, const std::function<double(double)>& cf,
                    std::span<const double> ts) {
  double worst = 0.0;
  for (double t : ts) worst = std::max(worst, std::abs(empirical_cf(emp, t) - cf(t)));
  return worst;
}

CheckResult check_fixed_point(const OracleSpec& oracle, const VerifyOptions& options,
                              double threshold) {
  if (!oracle.config) throw PreconditionError("check_fixed_point: oracle has no config");
  PerpetuityConfig config{*oracle.config};
  config.seed = options.seed;
  const double residual = fixed_point_residual(config, options.n, batch(options));
  return make_check(oracle.name, "fixed-point residual", oracle.params, residual, threshold,
                    Compare::below);
}

std::span<const std::string_view> example_names() { return kExamples; }

bool is_example(std::string_view name) {
  return std::find(kExamples.begin(), kExamples.end(), name) != kExamples.end();
}

std::vector<CheckResult> verify_example(std::string_view name, const VerifyOptions& options) {
  if (name == "geometric") return verify_geometric(options);
  if (name == "uniform-digits") return verify_uniform_digits(options);
  if (name == "uniform-symmetric") return verify_uniform_symmetric(options);
  if (name == "gamma") return verify_gamma(options);
  if (name == "levy-half") return verify_levy_half(options);
  if (name == "pitman-yor") return verify_pitman_yor();
  if (name == "exp-moments") return verify_exp_moments(options);
  if (name == "abscissa-boundary") return verify_abscissa_boundary();
  throw PreconditionError("unknown example: " + std::string(name));
}

bool all_pass(std::span<const CheckResult> checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

}  // namespace perpetua
