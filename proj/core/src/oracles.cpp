#include "perpetua/oracles.hpp"

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace perpetua {

namespace bm = boost::math;

std::string_view to_string(CfDecay d) noexcept {
  switch (d) {
    case CfDecay::decaying: return "decaying";
    case CfDecay::persistent: return "persistent";
    case CfDecay::inconclusive: return "inconclusive";
  }
  return "?";
}

OracleSpec oracle_geometric(double p) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("oracle_geometric: p must lie in (0, 1)");
  OracleSpec o;
  o.name = "geometric";
  o.params = {{"p", p}};
  o.pmf = [p](double k) {
    if (k < 1.0 || k != std::floor(k)) return 0.0;
    return std::pow(1.0 - p, k - 1.0) * p;
  };
  o.config = JointLaw::independent(ScalarLaw::finite_discrete({0.0, 1.0}, {p, 1.0 - p}),
                                   ScalarLaw::point_mass(1.0));
  return o;
}

OracleSpec oracle_uniform_digits(std::uint64_t n) {
  if (n < 2) throw PreconditionError("oracle_uniform_digits: n must be >= 2");
  const double w = static_cast<double>(n);
  OracleSpec o;
  o.name = "uniform-scaled-digits";
  o.params = {{"n", w}};
  o.cdf = [w](double x) { return std::clamp(x / w, 0.0, 1.0); };
  o.config = JointLaw::independent(ScalarLaw::point_mass(1.0 / w), ScalarLaw::uniform_discrete(n));
  return o;
}

OracleSpec oracle_uniform_symmetric() {
  OracleSpec o;
  o.name = "uniform-symmetric";
  o.params = {{"c", 0.5}};
  o.cdf = [](double x) { return std::clamp((x + 2.0) / 4.0, 0.0, 1.0); };
  o.config = JointLaw::independent(ScalarLaw::point_mass(0.5), ScalarLaw::rademacher(1.0));
  return o;
}

OracleSpec oracle_gamma_sizebias(double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("oracle_gamma_sizebias: alpha must be positive");
  OracleSpec o;
  o.name = "gamma-sizebias";
  o.params = {{"alpha", alpha}};
  o.cdf = [alpha](double x) { return x <= 0.0 ? 0.0 : bm::gamma_p(alpha + 1.0, alpha * x); };
  o.lt = [alpha](double s) { return std::pow(alpha / (alpha + s), alpha + 1.0); };
  o.config = JointLaw::independent(ScalarLaw::beta(1.0, alpha), ScalarLaw::gamma(alpha, alpha));
  return o;
}

double levy_half_q_check(double b, std::span<const double> s_grid) {
  if (!(b > 0.0)) throw PreconditionError("levy_half_q_check: b must be positive");
  const double shape = 1.5;
  const double scale = b * b / 4.0;
  const double log_norm = shape * std::log(scale) - std::lgamma(shape);
  double worst = 0.0;
  for (double s : s_grid) {
    auto integrand = [&](double x) {
      if (x <= 0.0) return 0.0;
      return std::exp(log_norm - (shape + 1.0) * std::log(x) - scale / x - s * x);
    };
    // split at the mode of the integrand
    const double mode = ((shape + 1.0) - std::sqrt((shape + 1.0) * (shape + 1.0) + 4.0 * s * scale)) /
                        (-2.0 * s);
    const double breaks[] = {0.0, mode, kInf};
    const double numeric = quad::integrate_pieces(integrand, breaks, 1e-13);
    const double closed = (1.0 + b * std::sqrt(s)) * std::exp(-b * std::sqrt(s));
    worst = std::max(worst, std::fabs(numeric - closed));
  }
  return worst;
}

OracleSpec oracle_levy_half(double b) {
  if (!(b > 0.0)) throw PreconditionError("oracle_levy_half: b must be positive");
  const double grid[] = {0.5, 1.0, 2.0};
  const double deviation = levy_half_q_check(b, grid);
  if (!(deviation < kLevyQTolerance))
    throw PreconditionError("oracle_levy_half: Q Laplace transform check failed (deviation " +
                            std::to_string(deviation) + ")");
  OracleSpec o;
  o.name = "levy-half";
  o.params = {{"b", b}};
  o.cdf = [b](double x) { return x <= 0.0 ? 0.0 : std::erfc(b / (2.0 * std::sqrt(x))); };
  o.lt = [b](double s) { return std::exp(-b * std::sqrt(s)); };
  o.config = JointLaw::independent(ScalarLaw::weibull(0.5, 1.0),
                                   ScalarLaw::inverse_gamma(1.5, b * b / 4.0));
  return o;
}

namespace {

double pitman_yor_lt(double s) {
  const double r = std::sqrt(2.0 * s);
  const double sh = std::sinh(r);
  return 3.0 * (r * std::cosh(r) - sh) / (sh * sh * sh);
}

double pitman_yor_phi(double s) {
  const double r = std::sqrt(2.0 * s);
  const double q = r / std::sinh(r);
  return q * q;
}

}  // namespace

OracleSpec oracle_pitman_yor() {
  OracleSpec o;
  o.name = "pitman-yor-lt";
  o.lt = pitman_yor_lt;
  return o;
}

double oracle_pitman_yor_identity(std::span<const double> s_grid) {
  constexpr double mean_q = 2.0 / 3.0;
  double worst = 0.0;
  for (double s : s_grid) {
    if (!(s > 0.0)) throw PreconditionError("oracle_pitman_yor_identity: s must be positive");
    const double h = 1e-6 * s;
    const double dphi = (pitman_yor_phi(s + h) - pitman_yor_phi(s - h)) / (2.0 * h);
    worst = std::max(worst, std::fabs(pitman_yor_lt(s) + dphi / mean_q));
  }
  return worst;
}

double size_bias_lt_deviation(const OracleSpec& oracle, std::span<const double> s_grid) {
  if (!oracle.lt || !oracle.config)
    throw PreconditionError("size_bias_lt_deviation: oracle needs a transform and a config");
  const ScalarLaw& q = oracle.config->marginal_q();
  if (q.lower() < 0.0) throw PreconditionError("size_bias_lt_deviation: Q must be nonnegative");
  const double mean_q = abs_moment(q, 1.0);
  double worst = 0.0;
  for (double s : s_grid) {
    if (!(s > 0.0)) throw PreconditionError("size_bias_lt_deviation: s must be positive");
    const double h = 1e-6 * s;
    const double dlt = (exp_moment(q, -(s + h)) - exp_moment(q, -(s - h))) / (2.0 * h);
    worst = std::max(worst, std::fabs(oracle.lt(s) + dlt / mean_q));
  }
  return worst;
}

double bernoulli_cf(double c, double t) {
  double prod = 1.0;
  double arg = t;
  while (std::fabs(arg) >= 1e-12) {
    prod *= std::cos(arg);
    arg *= c;
    if (prod == 0.0) break;
  }
  return prod;
}

PurityReport purity_probe(const EmpiricalDistribution& emp, std::optional<double> bernoulli_c,
                          double t_max, double atom_min_prob) {
  if (emp.empty()) throw PreconditionError("purity_probe: empty sample");
  if (!(t_max > 0.0)) throw PreconditionError("purity_probe: t_max must be positive");
  if (bernoulli_c && !(std::fabs(*bernoulli_c) > 0.0 && std::fabs(*bernoulli_c) < 1.0))
    throw PreconditionError("purity_probe: bernoulli c must satisfy 0 < |c| < 1");

  PurityReport r;
  // a single observation is not evidence of an atom
  const double n = static_cast<double>(emp.size());
  r.atoms = atom_scan(emp, std::max(atom_min_prob, std::min(2.0, n) / n));

  std::vector<double> ts;
  for (double t = 0.5; t <= t_max; t *= 2.0) ts.push_back(t);
  if (bernoulli_c) {
    const double step = 1.0 / std::fabs(*bernoulli_c);
    for (double t = std::numbers::pi; t <= t_max; t *= step) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  bool any_tail = false;
  bool persistent = false;
  bool decayed = true;
  double deviation = 0.0;
  for (double t : ts) {
    const std::complex<double> phi = empirical_cf(emp, t);
    const double modulus = std::abs(phi);
    r.grid.push_back({t, modulus});
    if (t > kCfTailStart) {
      any_tail = true;
      persistent = persistent || modulus > kCfPersistent;
      decayed = decayed && modulus < kCfDecayed;
    }
    if (bernoulli_c) deviation = std::max(deviation, std::abs(phi - bernoulli_cf(*bernoulli_c, t)));
  }
  if (any_tail) {
    if (persistent)
      r.cf_decay = CfDecay::persistent;
    else if (decayed)
      r.cf_decay = CfDecay::decaying;
  }
  if (bernoulli_c) r.analytic_cf_deviation = deviation;
  return r;
}

}  // namespace perpetua
