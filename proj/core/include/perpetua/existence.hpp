#pragma once

#include "perpetua/law.hpp"

#include <optional>
#include <string_view>

namespace perpetua {

enum class Tri { yes, no, unknown };
enum class Finiteness { finite, infinite, unknown };
enum class Method { analytic, monte_carlo_heuristic };

enum class Verdict {
  converges_as,
  diverges_in_probability,
  trivial_degenerate,
  exact_stop,  // P{M = 0} > 0: the series stops at the first zero of M
  unknown,
};

std::string_view to_string(Tri v) noexcept;
std::string_view to_string(Finiteness v) noexcept;
std::string_view to_string(Method v) noexcept;
std::string_view to_string(Verdict v) noexcept;

// Verdict on the Goldie-Maller integral
//   I = int_{(1, inf)} log x / A(log x) P{|Q| in dx}.
struct IntegralVerdict {
  Finiteness finiteness = Finiteness::unknown;
  Method method = Method::analytic;
  // analytic: E log+|Q|; heuristic: the truncated estimate of I.
  double statistic = 0.0;
};

struct ExistenceReport {
  bool nonzero_ok = false;  // P{M = 0} = 0 and P{Q = 0} < 1
  Tri pi_to_zero = Tri::unknown;
  std::optional<IntegralVerdict> integral;  // empty when not evaluated
  std::optional<double> degenerate_at;      // c with P{Q + Mc = c} = 1
  Verdict verdict = Verdict::unknown;

  double p_m_zero = 0.0;
  double p_q_zero = 0.0;
  std::optional<double> log_abs_m_mean;  // E log|M| when P{M = 0} = 0
};

// A(x) = E min(log-|M|, x) = int_0^x P{-log|M| > y} dy.
// Exact for discrete laws, quadrature otherwise. Rejects x < 0 and P{M = 0} > 0.
double a_of_x(const ScalarLaw& law_m, double x);

// Drift test: yes when E log|M| < 0, no when >= 0, unknown when undefined.
Tri pi_to_zero_verdict(const ScalarLaw& law_m);

// Finiteness of I. Requires pi_to_zero_verdict = yes. Since Pi_n -> 0 forces
// P{|M| < 1} > 0, A is bounded below on [1, inf) and I < inf iff E log+|Q| < inf;
// that is the analytic path. The Monte-Carlo path is a labelled heuristic.
IntegralVerdict gm_integral_verdict(const JointLaw& joint);

struct MonteCarloIntegralOptions {
  std::uint64_t draws = 1'000'000;
  std::uint64_t seed = 0x9E3779B97F4A7C15ull;
};
IntegralVerdict gm_integral_monte_carlo(const JointLaw& joint,
                                        const MonteCarloIntegralOptions& options = {});

// c with P{Q + Mc = c} = 1, if any.
std::optional<double> degeneracy_scan(const JointLaw& joint);

ExistenceReport existence_report(const JointLaw& joint);

}  // namespace perpetua
