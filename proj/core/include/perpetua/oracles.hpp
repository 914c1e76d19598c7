#pragma once

#include "perpetua/empirical.hpp"
#include "perpetua/law.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace perpetua {

// A closed-form reference law for Z together with the (M, Q) law that
// generates it. Sampled-comparison oracles carry exactly one of cdf / pmf;
// transform oracles carry lt.
struct OracleSpec {
  std::string name;
  std::map<std::string, double> params;
  std::function<double(double)> cdf;  // P{Z <= x}
  std::function<double(double)> pmf;  // P{Z = k}, integer k
  std::function<double(double)> lt;   // E e^{-sZ}
  std::optional<JointLaw> config;
};

// M in {0: p, 1: 1-p}, Q = 1; Z ~ Geometric(p) on {1, 2, ...}.
OracleSpec oracle_geometric(double p);
// M = 1/n, Q uniform on {0, ..., n-1}; Z ~ Uniform(0, n).
OracleSpec oracle_uniform_digits(std::uint64_t n);
// M = 1/2, Q = +-1; Z ~ Uniform(-2, 2).
OracleSpec oracle_uniform_symmetric();
// M ~ Beta(1, alpha), Q ~ Gamma(alpha, rate alpha); Z ~ Gamma(alpha + 1, rate alpha).
OracleSpec oracle_gamma_sizebias(double alpha);
// M ~ Weibull(1/2, 1), Q ~ InverseGamma(3/2, b^2/4); Z is positive 1/2-stable,
// P{Z <= x} = erfc(b / (2 sqrt x)), E e^{-sZ} = e^{-b sqrt s}.
// Runs levy_half_q_check first and throws PreconditionError if it fails.
OracleSpec oracle_levy_half(double b);
// E e^{-sZ} = 3 (r cosh r - sinh r) / sinh^3 r, r = sqrt(2s). No sampled config.
OracleSpec oracle_pitman_yor();

inline constexpr double kLevyQTolerance = 1e-8;

// max_s |int e^{-sx} g(x) dx - (1 + b sqrt s) e^{-b sqrt s}|, with g the
// InverseGamma(3/2, b^2/4) density integrated numerically.
double levy_half_q_check(double b, std::span<const double> s_grid);

// max_s |LT(s) - (-phi'(s) / E Q)|, phi(s) = (r / sinh r)^2, E Q = 2/3,
// phi' by central differences with step 1e-6 s.
double oracle_pitman_yor_identity(std::span<const double> s_grid);

// max_s |lt(s) - (-L_Q'(s) / E Q)| for an oracle whose Z is the size-biased
// law of its Q. L_Q comes from the law model; L_Q' by central differences.
double size_bias_lt_deviation(const OracleSpec& oracle, std::span<const double> s_grid);

enum class CfDecay { decaying, persistent, inconclusive };
std::string_view to_string(CfDecay d) noexcept;

struct CfPoint {
  double t;
  double modulus;
};

struct PurityReport {
  std::vector<Atom> atoms;
  CfDecay cf_decay = CfDecay::inconclusive;
  std::vector<CfPoint> grid;
  std::optional<double> analytic_cf_deviation;
  static constexpr std::string_view method = "heuristic";
};

inline constexpr double kCfTailStart = 50.0;
inline constexpr double kCfPersistent = 0.2;
inline constexpr double kCfDecayed = 0.05;

// prod_{k >= 0} cos(c^k t), truncated once |c|^k |t| < 1e-12.
double bernoulli_cf(double c, double t);

// Atom scan (values seen at least twice, or the lone value of a single
// draw) plus |empirical cf| on the grid {2^j <= t_max}, extended by
// {pi c^-j <= t_max} when bernoulli_c is given. Past t = 50 the scan reads
// persistent if some modulus exceeds 0.2 and decaying if all stay below 0.05.
// bernoulli_c = c asserts M = c and Q = +-1; the analytic cf deviation is
// then reported over the grid. The classification is a sample heuristic.
PurityReport purity_probe(const EmpiricalDistribution& emp, std::optional<double> bernoulli_c,
                          double t_max, double atom_min_prob = 1e-3);

}  // namespace perpetua
