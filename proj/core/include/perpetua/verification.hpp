#pragma once

#include "perpetua/empirical.hpp"
#include "perpetua/oracles.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace perpetua {

enum class Compare { below, above, at_most };

// One pass/fail line: `statistic` compared with `threshold`.
struct CheckResult {
  std::string oracle;
  std::string check;
  std::map<std::string, double> params;
  double statistic = 0.0;
  double threshold = 0.0;
  Compare compare = Compare::below;
  bool pass = false;
};

CheckResult make_check(std::string oracle, std::string check, std::map<std::string, double> params,
                       double statistic, double threshold, Compare compare);

// 1/2 sum_k |F_n{k} - pmf(k)| over the integers, for a pmf summing to one.
double tv_distance_pmf(const EmpiricalDistribution& emp, const std::function<double(double)>& pmf);

struct ChiSquare {
  double statistic;
  unsigned dof;
  double p_value;
};

// Pearson goodness of fit on the integer bins k_min, k_min + 1, ... while the
// expected count is at least min_expected; the rest pools into one tail bin.
ChiSquare chi_square_gof(const EmpiricalDistribution& emp, const std::function<double(double)>& pmf,
                         double k_min = 1.0, double min_expected = 5.0);

// sup_t |empirical cf(t) - cf(t)| over the given grid.
double cf_deviation(const EmpiricalDistribution& emp, const std::function<double(double)>& cf,
                    std::span<const double> ts);

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::uint64_t n = 100'000;
  unsigned workers = 0;
};

// Two-sample KS residual of Z =d Q + M Z for an oracle's paired config.
CheckResult check_fixed_point(const OracleSpec& oracle, const VerifyOptions& options,
                              double threshold = 0.01);

// geometric, uniform-digits, uniform-symmetric, gamma, levy-half, pitman-yor,
// exp-moments, abscissa-boundary.
std::span<const std::string_view> example_names();
bool is_example(std::string_view name);

// Runs the named example's checks. exp-moments draws max(options.n, 10^6)
// samples. Throws PreconditionError for unknown names.
std::vector<CheckResult> verify_example(std::string_view name, const VerifyOptions& options);

bool all_pass(std::span<const CheckResult> checks);

}  // namespace perpetua
