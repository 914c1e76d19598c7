#include "perpetua/law.hpp"

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <span>

namespace perpetua {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

namespace bm = boost::math;

constexpr double kProbSumTol = 1e-12;

void require(bool ok, const char* what) {
  if (!ok) throw InvalidLaw(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

double log_sum_exp(std::span<const double> xs) {
  double hi = -kInf;
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

double log_add_exp(double a, double b) {
  const std::array<double, 2> xs{a, b};
  return log_sum_exp(xs);
}

std::vector<double> cumulative_sum(const std::vector<double>& probs) {
  std::vector<double> cum(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cum.begin());
  return cum;
}

std::size_t pick_index(const std::vector<double>& cum, const std::vector<double>& probs,
                       double u) {
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it != cum.end()) return static_cast<std::size_t>(it - cum.begin());
  // u landed in the rounding gap above the last cumulative value.
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return i;
  return probs.size() - 1;
}

// P{X < x}
double cdf_left(const ScalarLaw& law, double x) {
  return std::visit(
      overloaded{
          [&](const family::PointMass& f) { return f.c < x ? 1.0 : 0.0; },
          [&](const family::FiniteDiscrete& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.values[i] < x) acc += f.probs[i];
            return acc;
          },
          [&](const family::UniformDiscreteRange&) { return law.cdf(x) - law.atom(x); },
          [&](const family::Poisson&) { return law.cdf(x) - law.atom(x); },
          [&](const family::SignedRademacher& f) {
            if (x <= -f.scale) return 0.0;
            return x <= f.scale ? 0.5 : 1.0;
          },
          [&](const auto&) { return law.cdf(x); },
      },
      law.family());
}

// P{|X| > 1} and P{|X| = 1}, each summed from its own pieces so that a
// law confined to [-1, 1] (or (-1, 1)) yields an exact zero.
double prob_abs_above_one(const ScalarLaw& law) {
  return std::clamp(law.sf(1.0) + cdf_left(law, -1.0), 0.0, 1.0);
}
double prob_abs_equal_one(const ScalarLaw& law) {
  return std::clamp(law.atom(1.0) + law.atom(-1.0), 0.0, 1.0);
}

// log E e^{sU} for U ~ Uniform(lo, hi).
double log_uniform_mgf(double s, double lo, double hi) {
  if (s == 0.0 || hi == lo) return s * lo;
  const double t = s * (hi - lo);
  if (s > 0.0) return s * hi + std::log(-std::expm1(-t) / t);
  return s * lo + std::log(std::expm1(t) / t);
}

double gamma_unit_sample(double shape, RandomStream& rng) {
  if (shape < 1.0) {
    const double g = gamma_unit_sample(shape + 1.0, rng);
    return g * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  // Marsaglia & Tsang (2000).
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double poisson_sample(double mean, RandomStream& rng) {
  if (mean < 12.0) {
    const double limit = std::exp(-mean);
    double prod = rng.uniform_open();
    std::uint64_t k = 0;
    while (prod > limit) {
      ++k;
      prod *= rng.uniform_open();
    }
    return static_cast<double>(k);
  }
  // PTRS, Hormann (1993).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform_open();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0))
      return k;
  }
}

double poisson_log_pmf(double k, double mean) {
  return -mean + k * std::log(mean) - std::lgamma(k + 1.0);
}

// Sum over the Poisson pmf of g(k), stopping once past the bulk and the
// terms no longer move the sum.
template <class G>
double poisson_series(double mean, G&& g) {
  double acc = 0.0;
  const double bulk_end = mean + 20.0 * std::sqrt(mean) + 50.0;
  for (double k = 0.0;; k += 1.0) {
    const double term = g(k) * std::exp(poisson_log_pmf(k, mean));
    acc += term;
    if (k > bulk_end && term <= 1e-17 * acc) break;
    if (k > 1e7) break;
  }
  return acc;
}

std::vector<double> support_breaks(const ScalarLaw& law) {
  std::vector<double> breaks{law.lower()};
  if (law.lower() < 0.0 && law.upper() > 0.0) breaks.push_back(0.0);
  for (double q : {0.25, 0.5, 0.75}) breaks.push_back(law.quantile(q));
  breaks.push_back(law.upper());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScalarLaw construction

ScalarLaw::ScalarLaw(Family f) : family_(std::move(f)) {
  if (const auto* fd = std::get_if<family::FiniteDiscrete>(&family_)) {
    cumulative_ = cumulative_sum(fd->probs);
  }
}

ScalarLaw ScalarLaw::point_mass(double c) {
  require(std::isfinite(c), "point_mass: c must be finite");
  return ScalarLaw(family::PointMass{c});
}

ScalarLaw ScalarLaw::finite_discrete(std::vector<double> values, std::vector<double> probs) {
  require(!values.empty(), "finite_discrete: no values");
  require(values.size() == probs.size(), "finite_discrete: values and probs differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(std::isfinite(values[i]), "finite_discrete: values must be finite");
    require(std::isfinite(probs[i]) && probs[i] >= 0.0, "finite_discrete: probs must be >= 0");
    total += probs[i];
  }
  require(std::fabs(total - 1.0) <= kProbSumTol, "finite_discrete: probs must sum to 1");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "finite_discrete: values must be distinct");
  return ScalarLaw(family::FiniteDiscrete{std::move(values), std::move(probs)});
}

ScalarLaw ScalarLaw::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform: need finite lo < hi");
  return ScalarLaw(family::UniformContinuous{lo, hi});
}

ScalarLaw ScalarLaw::uniform_discrete(std::uint64_t n) {
  require(n >= 1, "uniform_discrete: n must be positive");
  return ScalarLaw(family::UniformDiscreteRange{n});
}

ScalarLaw ScalarLaw::exponential(double rate) {
  require(positive_finite(rate), "exponential: rate must be positive");
  return ScalarLaw(family::Exponential{rate});
}

ScalarLaw ScalarLaw::gamma(double shape, double rate) {
  require(positive_finite(shape) && positive_finite(rate), "gamma: shape and rate must be positive");
  return ScalarLaw(family::Gamma{shape, rate});
}

ScalarLaw ScalarLaw::beta(double alpha, double beta) {
  require(positive_finite(alpha) && positive_finite(beta), "beta: alpha and beta must be positive");
  return ScalarLaw(family::Beta{alpha, beta});
}

ScalarLaw ScalarLaw::weibull(double shape, double scale) {
  require(positive_finite(shape) && positive_finite(scale),
          "weibull: shape and scale must be positive");
  return ScalarLaw(family::Weibull{shape, scale});
}

ScalarLaw ScalarLaw::poisson(double mean) {
  require(positive_finite(mean), "poisson: mean must be positive");
  return ScalarLaw(family::Poisson{mean});
}

ScalarLaw ScalarLaw::inverse_gamma(double shape, double scale) {
  require(positive_finite(shape) && positive_finite(scale),
          "inverse_gamma: shape and scale must be positive");
  return ScalarLaw(family::InverseGamma{shape, scale});
}

ScalarLaw ScalarLaw::rademacher(double scale) {
  require(positive_finite(scale), "rademacher: scale must be positive");
  return ScalarLaw(family::SignedRademacher{scale});
}

ScalarLaw ScalarLaw::log_pareto(double alpha) {
  require(positive_finite(alpha), "log_pareto: alpha must be positive");
  return ScalarLaw(family::LogPareto{alpha});
}

std::string_view ScalarLaw::family_name() const noexcept {
  return std::visit(overloaded{
                        [](const family::PointMass&) { return "point_mass"; },
                        [](const family::FiniteDiscrete&) { return "finite_discrete"; },
                        [](const family::UniformContinuous&) { return "uniform"; },
                        [](const family::UniformDiscreteRange&) { return "uniform_discrete"; },
                        [](const family::Exponential&) { return "exponential"; },
                        [](const family::Gamma&) { return "gamma"; },
                        [](const family::Beta&) { return "beta"; },
                        [](const family::Weibull&) { return "weibull"; },
                        [](const family::Poisson&) { return "poisson"; },
                        [](const family::InverseGamma&) { return "inverse_gamma"; },
                        [](const family::SignedRademacher&) { return "rademacher"; },
                        [](const family::LogPareto&) { return "log_pareto"; },
                    },
                    family_);
}

bool ScalarLaw::is_discrete() const noexcept {
  return std::holds_alternative<family::PointMass>(family_) ||
         std::holds_alternative<family::FiniteDiscrete>(family_) ||
         std::holds_alternative<family::UniformDiscreteRange>(family_) ||
         std::holds_alternative<family::Poisson>(family_) ||
         std::holds_alternative<family::SignedRademacher>(family_);
}

double ScalarLaw::cdf(double x) const {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x < lower()) return 0.0;
  if (x >= upper()) return 1.0;
  return std::visit(
      overloaded{
          [&](const family::PointMass& f) { return x >= f.c ? 1.0 : 0.0; },
          [&](const family::FiniteDiscrete& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.values[i] <= x) acc += f.probs[i];
            return std::min(acc, 1.0);
          },
          [&](const family::UniformContinuous& f) { return (x - f.lo) / (f.hi - f.lo); },
          [&](const family::UniformDiscreteRange& f) {
            return (std::floor(x) + 1.0) / static_cast<double>(f.n);
          },
          [&](const family::Exponential& f) { return -std::expm1(-f.rate * x); },
          [&](const family::Gamma& f) { return bm::gamma_p(f.shape, f.rate * x); },
          [&](const family::Beta& f) { return bm::ibeta(f.alpha, f.beta, x); },
          [&](const family::Weibull& f) { return -std::expm1(-std::pow(x / f.scale, f.shape)); },
          [&](const family::Poisson& f) { return bm::gamma_q(std::floor(x) + 1.0, f.mean); },
          [&](const family::InverseGamma& f) { return bm::gamma_q(f.shape, f.scale / x); },
          [&](const family::SignedRademacher&) { return 0.5; },
          [&](const family::LogPareto& f) { return 1.0 - std::pow(std::log(x), -f.alpha); },
      },
      family_);
}

double ScalarLaw::sf(double x) const {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x < lower()) return 1.0;
  if (x >= upper()) return 0.0;
  return std::visit(
      overloaded{
          [&](const family::FiniteDiscrete& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.values[i] > x) acc += f.probs[i];
            return std::min(acc, 1.0);
          },
          [&](const family::UniformContinuous& f) { return (f.hi - x) / (f.hi - f.lo); },
          [&](const family::Exponential& f) { return std::exp(-f.rate * x); },
          [&](const family::Gamma& f) { return bm::gamma_q(f.shape, f.rate * x); },
          [&](const family::Beta& f) { return bm::ibetac(f.alpha, f.beta, x); },
          [&](const family::Weibull& f) { return std::exp(-std::pow(x / f.scale, f.shape)); },
          [&](const family::Poisson& f) { return bm::gamma_p(std::floor(x) + 1.0, f.mean); },
          [&](const family::InverseGamma& f) { return bm::gamma_p(f.shape, f.scale / x); },
          [&](const family::LogPareto& f) { return std::pow(std::log(x), -f.alpha); },
          [&](const auto&) { return 1.0 - cdf(x); },
      },
      family_);
}

double ScalarLaw::atom(double x) const {
  return std::visit(
      overloaded{
          [&](const family::PointMass& f) { return x == f.c ? 1.0 : 0.0; },
          [&](const family::FiniteDiscrete& f) {
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.values[i] == x) return f.probs[i];
            return 0.0;
          },
          [&](const family::UniformDiscreteRange& f) {
            const bool hit = x >= 0.0 && x < static_cast<double>(f.n) && x == std::floor(x);
            return hit ? 1.0 / static_cast<double>(f.n) : 0.0;
          },
          [&](const family::Poisson& f) {
            const bool hit = x >= 0.0 && x == std::floor(x);
            return hit ? std::exp(poisson_log_pmf(x, f.mean)) : 0.0;
          },
          [&](const family::SignedRademacher& f) {
            return (x == f.scale || x == -f.scale) ? 0.5 : 0.0;
          },
          [&](const auto&) { return 0.0; },
      },
      family_);
}

double ScalarLaw::pdf(double x) const {
  if (is_discrete()) throw PreconditionError("pdf: law is discrete");
  if (x < lower() || x > upper()) return 0.0;
  return std::visit(
      overloaded{
          [&](const family::UniformContinuous& f) { return 1.0 / (f.hi - f.lo); },
          [&](const family::Exponential& f) { return f.rate * std::exp(-f.rate * x); },
          [&](const family::Gamma& f) {
            if (x == 0.0) return f.shape < 1.0 ? kInf : (f.shape == 1.0 ? f.rate : 0.0);
            return std::exp(f.shape * std::log(f.rate) + (f.shape - 1.0) * std::log(x) -
                            f.rate * x - std::lgamma(f.shape));
          },
          [&](const family::Beta& f) {
            if (x == 0.0 || x == 1.0) return bm::ibeta_derivative(f.alpha, f.beta, x);
            return std::exp((f.alpha - 1.0) * std::log(x) + (f.beta - 1.0) * std::log1p(-x) -
                            std::log(bm::beta(f.alpha, f.beta)));
          },
          [&](const family::Weibull& f) {
            const double z = x / f.scale;
            if (z == 0.0) return f.shape < 1.0 ? kInf : (f.shape == 1.0 ? 1.0 / f.scale : 0.0);
            return f.shape / f.scale * std::pow(z, f.shape - 1.0) * std::exp(-std::pow(z, f.shape));
          },
          [&](const family::InverseGamma& f) {
            if (x == 0.0) return 0.0;
            return std::exp(f.shape * std::log(f.scale) - std::lgamma(f.shape) -
                            (f.shape + 1.0) * std::log(x) - f.scale / x);
          },
          [&](const family::LogPareto& f) {
            const double w = std::log(x);
            return f.alpha * std::pow(w, -f.alpha - 1.0) / x;
          },
          [&](const auto&) -> double { throw PreconditionError("pdf: law is discrete"); },
      },
      family_);
}

double ScalarLaw::lower() const noexcept {
  return std::visit(
      overloaded{
          [](const family::PointMass& f) { return f.c; },
          [](const family::FiniteDiscrete& f) {
            double lo = kInf;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.probs[i] > 0.0) lo = std::min(lo, f.values[i]);
            return lo;
          },
          [](const family::UniformContinuous& f) { return f.lo; },
          [](const family::SignedRademacher& f) { return -f.scale; },
          [](const family::LogPareto&) { return std::numbers::e; },
          [](const auto&) { return 0.0; },
      },
      family_);
}

double ScalarLaw::upper() const noexcept {
  return std::visit(
      overloaded{
          [](const family::PointMass& f) { return f.c; },
          [](const family::FiniteDiscrete& f) {
            double hi = -kInf;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.probs[i] > 0.0) hi = std::max(hi, f.values[i]);
            return hi;
          },
          [](const family::UniformContinuous& f) { return f.hi; },
          [](const family::UniformDiscreteRange& f) { return static_cast<double>(f.n - 1); },
          [](const family::Beta&) { return 1.0; },
          [](const family::SignedRademacher& f) { return f.scale; },
          [](const auto&) { return kInf; },
      },
      family_);
}

std::optional<double> ScalarLaw::constant() const {
  return std::visit(
      overloaded{
          [](const family::PointMass& f) -> std::optional<double> { return f.c; },
          [](const family::FiniteDiscrete& f) -> std::optional<double> {
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.probs[i] >= 1.0 - kProbSumTol) return f.values[i];
            return std::nullopt;
          },
          [](const family::UniformDiscreteRange& f) -> std::optional<double> {
            if (f.n == 1) return 0.0;
            return std::nullopt;
          },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      family_);
}

double ScalarLaw::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw PreconditionError("quantile: q outside [0, 1]");
  double lo = lower();
  double hi = upper();
  if (lo == hi) return lo;
  if (std::isinf(lo)) {
    lo = std::min(-1.0, hi - 1.0);
    while (cdf(lo) >= q && lo > -1e300) lo *= 2.0;
  }
  if (std::isinf(hi)) {
    hi = std::max(1.0, lo + 1.0);
    while (cdf(hi) < q && hi < 1e300) hi = hi * 2.0 + 1.0;
  }
  if (cdf(lo) >= q) return lo;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) >= q)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// JointLaw

JointLaw::JointLaw(Coupling coupling, ScalarLaw m, ScalarLaw q)
    : coupling_(std::move(coupling)), marginal_m_(std::move(m)), marginal_q_(std::move(q)) {}

JointLaw JointLaw::independent(ScalarLaw m, ScalarLaw q) {
  return JointLaw(Independent{m, q}, m, q);
}

JointLaw JointLaw::finite_joint(std::vector<JointAtom> atoms) {
  require(!atoms.empty(), "finite_joint: no atoms");
  double total = 0.0;
  std::map<double, double> m_marginal;
  std::map<double, double> q_marginal;
  for (const auto& a : atoms) {
    require(std::isfinite(a.m) && std::isfinite(a.q), "finite_joint: atoms must be finite");
    require(std::isfinite(a.prob) && a.prob >= 0.0, "finite_joint: probs must be >= 0");
    total += a.prob;
    m_marginal[a.m] += a.prob;
    q_marginal[a.q] += a.prob;
  }
  require(std::fabs(total - 1.0) <= kProbSumTol, "finite_joint: probs must sum to 1");

  auto to_law = [](const std::map<double, double>& marginal) {
    std::vector<double> values;
    std::vector<double> probs;
    for (const auto& [v, p] : marginal) {
      values.push_back(v);
      probs.push_back(p);
    }
    return ScalarLaw::finite_discrete(std::move(values), std::move(probs));
  };
  std::vector<double> probs;
  for (const auto& a : atoms) probs.push_back(a.prob);

  JointLaw joint(FiniteJoint{std::move(atoms)}, to_law(m_marginal), to_law(q_marginal));
  joint.cumulative_ = cumulative_sum(probs);
  return joint;
}

// ---------------------------------------------------------------------------
// Sampling

double sample_scalar(const ScalarLaw& law, RandomStream& rng) {
  return std::visit(
      overloaded{
          [&](const family::PointMass& f) { return f.c; },
          [&](const family::FiniteDiscrete& f) {
            return f.values[pick_index(law.cumulative_, f.probs, rng.uniform())];
          },
          [&](const family::UniformContinuous& f) { return f.lo + (f.hi - f.lo) * rng.uniform(); },
          [&](const family::UniformDiscreteRange& f) {
            const double n = static_cast<double>(f.n);
            return std::min(std::floor(rng.uniform() * n), n - 1.0);
          },
          [&](const family::Exponential& f) { return -std::log(rng.uniform_open()) / f.rate; },
          [&](const family::Gamma& f) { return gamma_unit_sample(f.shape, rng) / f.rate; },
          [&](const family::Beta& f) {
            if (f.alpha == 1.0) return -std::expm1(std::log(rng.uniform_open()) / f.beta);
            if (f.beta == 1.0) return std::pow(rng.uniform_open(), 1.0 / f.alpha);
            const double x = gamma_unit_sample(f.alpha, rng);
            const double y = gamma_unit_sample(f.beta, rng);
            return x / (x + y);
          },
          [&](const family::Weibull& f) {
            return f.scale * std::pow(-std::log(rng.uniform_open()), 1.0 / f.shape);
          },
          [&](const family::Poisson& f) { return poisson_sample(f.mean, rng); },
          [&](const family::InverseGamma& f) { return f.scale / gamma_unit_sample(f.shape, rng); },
          [&](const family::SignedRademacher& f) {
            return (rng.next_u64() >> 63) ? f.scale : -f.scale;
          },
          [&](const family::LogPareto& f) {
            return std::exp(std::pow(rng.uniform_open(), -1.0 / f.alpha));
          },
      },
      law.family());
}

PairDraw sample_joint(const JointLaw& joint, PairStream& streams) {
  if (const auto* ind = std::get_if<JointLaw::Independent>(&joint.coupling())) {
    const double m = sample_scalar(ind->m, streams.m);
    const double q = sample_scalar(ind->q, streams.q);
    return {m, q};
  }
  const auto& fj = std::get<JointLaw::FiniteJoint>(joint.coupling());
  const auto& atoms = fj.atoms;
  const double u = streams.m.uniform();
  auto it = std::upper_bound(joint.cumulative_.begin(), joint.cumulative_.end(), u);
  std::size_t idx;
  if (it != joint.cumulative_.end()) {
    idx = static_cast<std::size_t>(it - joint.cumulative_.begin());
  } else {
    idx = atoms.size() - 1;
    while (idx > 0 && atoms[idx].prob == 0.0) --idx;
  }
  return {atoms[idx].m, atoms[idx].q};
}

// ---------------------------------------------------------------------------
// Moments

double abs_moment(const ScalarLaw& law, double p) {
  if (!(p > 0.0)) throw PreconditionError("abs_moment: p must be positive");
  return std::visit(
      overloaded{
          [&](const family::PointMass& f) { return std::pow(std::fabs(f.c), p); },
          [&](const family::FiniteDiscrete& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.probs[i] > 0.0) acc += f.probs[i] * std::pow(std::fabs(f.values[i]), p);
            return acc;
          },
          [&](const family::UniformContinuous& f) {
            const double w = f.hi - f.lo;
            const double a = std::fabs(f.lo);
            const double b = std::fabs(f.hi);
            if (f.lo >= 0.0 || f.hi <= 0.0) {
              return std::fabs(std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / ((p + 1.0) * w);
            }
            return (std::pow(a, p + 1.0) + std::pow(b, p + 1.0)) / ((p + 1.0) * w);
          },
          [&](const family::UniformDiscreteRange& f) {
            double acc = 0.0;
            for (std::uint64_t k = 1; k < f.n; ++k) acc += std::pow(static_cast<double>(k), p);
            return acc / static_cast<double>(f.n);
          },
          [&](const family::Exponential& f) { return std::exp(std::lgamma(p + 1.0) - p * std::log(f.rate)); },
          [&](const family::Gamma& f) {
            return std::exp(std::lgamma(f.shape + p) - std::lgamma(f.shape) - p * std::log(f.rate));
          },
          [&](const family::Beta& f) {
            return std::exp(std::lgamma(f.alpha + p) + std::lgamma(f.alpha + f.beta) -
                            std::lgamma(f.alpha) - std::lgamma(f.alpha + f.beta + p));
          },
          [&](const family::Weibull& f) {
            return std::exp(p * std::log(f.scale) + std::lgamma(1.0 + p / f.shape));
          },
          [&](const family::Poisson& f) {
            return poisson_series(f.mean, [&](double k) { return k == 0.0 ? 0.0 : std::pow(k, p); });
          },
          [&](const family::InverseGamma& f) {
            if (p >= f.shape) return kInf;
            return std::exp(p * std::log(f.scale) + std::lgamma(f.shape - p) - std::lgamma(f.shape));
          },
          [&](const family::SignedRademacher& f) { return std::pow(f.scale, p); },
          [&](const family::LogPareto&) { return kInf; },
      },
      law.family());
}

double abs_moment_quadrature(const ScalarLaw& law, double p) {
  if (!(p > 0.0)) throw PreconditionError("abs_moment: p must be positive");
  if (law.is_discrete()) return abs_moment(law, p);
  if (std::holds_alternative<family::LogPareto>(law.family())) return kInf;
  const auto breaks = support_breaks(law);
  return quad::integrate_pieces(
      [&](double x) { return std::pow(std::fabs(x), p) * law.pdf(x); }, breaks);
}

double log_exp_moment(const ScalarLaw& law, double s, bool of_abs) {
  if (std::isnan(s)) return std::numeric_limits<double>::quiet_NaN();
  if (s == 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const family::PointMass& f) { return s * (of_abs ? std::fabs(f.c) : f.c); },
          [&](const family::FiniteDiscrete& f) {
            std::vector<double> terms;
            for (std::size_t i = 0; i < f.values.size(); ++i) {
              if (f.probs[i] <= 0.0) continue;
              const double v = of_abs ? std::fabs(f.values[i]) : f.values[i];
              terms.push_back(std::log(f.probs[i]) + s * v);
            }
            return log_sum_exp(terms);
          },
          [&](const family::UniformContinuous& f) {
            if (!of_abs || f.lo >= 0.0) return log_uniform_mgf(s, f.lo, f.hi);
            if (f.hi <= 0.0) return log_uniform_mgf(s, -f.hi, -f.lo);
            const double w = f.hi - f.lo;
            return log_add_exp(std::log(f.hi / w) + log_uniform_mgf(s, 0.0, f.hi),
                               std::log(-f.lo / w) + log_uniform_mgf(s, 0.0, -f.lo));
          },
          [&](const family::UniformDiscreteRange& f) {
            std::vector<double> terms;
            terms.reserve(f.n);
            for (std::uint64_t k = 0; k < f.n; ++k) terms.push_back(s * static_cast<double>(k));
            return log_sum_exp(terms) - std::log(static_cast<double>(f.n));
          },
          [&](const family::Exponential& f) {
            return s < f.rate ? -std::log1p(-s / f.rate) : kInf;
          },
          [&](const family::Gamma& f) {
            return s < f.rate ? -f.shape * std::log1p(-s / f.rate) : kInf;
          },
          [&](const family::Beta&) {
            const double shift = s > 0.0 ? 1.0 : 0.0;
            const double integral =
                quad::integrate([&](double x) { return std::exp(s * (x - shift)) * law.pdf(x); }, 0.0, 1.0);
            return s * shift + std::log(integral);
          },
          [&](const family::Weibull& f) {
            if (f.shape == 1.0) return s < 1.0 / f.scale ? -std::log1p(-s * f.scale) : kInf;
            if (f.shape < 1.0 && s > 0.0) return kInf;
            double peak = 0.0;
            double shift = 0.0;
            if (s > 0.0) {
              peak = f.scale * std::pow(s * f.scale / f.shape, 1.0 / (f.shape - 1.0));
              shift = s * peak - std::pow(peak / f.scale, f.shape);
            }
            auto integrand = [&](double x) {
              if (x <= 0.0) return 0.0;
              const double z = x / f.scale;
              return f.shape / f.scale * std::pow(z, f.shape - 1.0) *
                     std::exp(s * x - std::pow(z, f.shape) - shift);
            };
            std::vector<double> breaks{0.0, law.quantile(0.5), kInf};
            if (peak > 0.0) breaks.insert(breaks.begin() + 1, peak);
            std::sort(breaks.begin(), breaks.end());
            return shift + std::log(quad::integrate_pieces(integrand, breaks));
          },
          [&](const family::Poisson& f) { return f.mean * std::expm1(s); },
          [&](const family::InverseGamma& f) {
            if (s > 0.0) return kInf;
            const double t = -s;
            const double arg = 2.0 * std::sqrt(f.scale * t);
            const double k = bm::cyl_bessel_k(f.shape, arg);
            return std::log(2.0) + 0.5 * f.shape * std::log(f.scale * t) - std::lgamma(f.shape) +
                   std::log(k);
          },
          [&](const family::SignedRademacher& f) {
            if (of_abs) return s * f.scale;
            const double a = std::fabs(s * f.scale);
            return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
          },
          [&](const family::LogPareto& f) {
            if (s > 0.0) return kInf;
            const double integral = quad::integrate(
                [&](double w) { return std::exp(s * std::exp(w)) * f.alpha * std::pow(w, -f.alpha - 1.0); },
                1.0, kInf);
            return std::log(integral);
          },
      },
      law.family());
}

double exp_moment(const ScalarLaw& law, double s, bool of_abs) {
  return std::exp(log_exp_moment(law, s, of_abs));
}

double exp_abscissa(const ScalarLaw& law) {
  return std::visit(overloaded{
                        [](const family::Exponential& f) { return f.rate; },
                        [](const family::Gamma& f) { return f.rate; },
                        [](const family::Weibull& f) {
                          if (f.shape > 1.0) return kInf;
                          return f.shape == 1.0 ? 1.0 / f.scale : 0.0;
                        },
                        [](const family::InverseGamma&) { return 0.0; },
                        [](const family::LogPareto&) { return 0.0; },
                        [](const auto&) { return kInf; },
                    },
                    law.family());
}

// ---------------------------------------------------------------------------
// Joint functionals

double log_restricted_exp_moment(const JointLaw& joint, double s, QSign q_sign, MAtom m_atom) {
  if (!(s >= 0.0)) throw PreconditionError("restricted_exp_moment: s must be >= 0");
  const double m_value = m_atom == MAtom::plus_one ? 1.0 : -1.0;
  const double signed_s = q_sign == QSign::plus ? s : -s;
  if (const auto* ind = std::get_if<JointLaw::Independent>(&joint.coupling())) {
    const double p = ind->m.atom(m_value);
    if (p == 0.0) return -kInf;
    return std::log(p) + log_exp_moment(ind->q, signed_s);
  }
  std::vector<double> terms;
  for (const auto& a : std::get<JointLaw::FiniteJoint>(joint.coupling()).atoms) {
    if (a.m == m_value && a.prob > 0.0) terms.push_back(std::log(a.prob) + signed_s * a.q);
  }
  if (terms.empty()) return -kInf;
  return log_sum_exp(terms);
}

double restricted_exp_moment(const JointLaw& joint, double s, QSign q_sign, MAtom m_atom) {
  if (const auto* ind = std::get_if<JointLaw::Independent>(&joint.coupling())) {
    if (!(s >= 0.0)) throw PreconditionError("restricted_exp_moment: s must be >= 0");
    // Exact factorization; avoids the log/exp round trip.
    const double p = ind->m.atom(m_atom == MAtom::plus_one ? 1.0 : -1.0);
    if (p == 0.0) return 0.0;
    return p * exp_moment(ind->q, q_sign == QSign::plus ? s : -s);
  }
  return std::exp(log_restricted_exp_moment(joint, s, q_sign, m_atom));
}

double event_prob(const JointLaw& joint, Event event) {
  const ScalarLaw& m = joint.marginal_m();
  switch (event) {
    case Event::m_zero:
      return m.atom(0.0);
    case Event::m_one:
      return m.atom(1.0);
    case Event::m_minus_one:
      return m.atom(-1.0);
    case Event::abs_m_one:
      return prob_abs_equal_one(m);
    case Event::abs_m_below_one:
      return 1.0 - std::min(1.0, prob_abs_above_one(m) + prob_abs_equal_one(m));
    case Event::abs_m_at_most_one:
      return 1.0 - prob_abs_above_one(m);
    case Event::abs_m_above_one:
      return prob_abs_above_one(m);
    case Event::q_zero:
      return joint.marginal_q().atom(0.0);
  }
  return 0.0;
}

LogMoment log_abs_moment_mean(const ScalarLaw& law) {
  if (law.atom(0.0) > 0.0) throw PreconditionError("log_abs_moment_mean: P{M = 0} > 0");
  const double value = std::visit(
      overloaded{
          [](const family::PointMass& f) { return std::log(std::fabs(f.c)); },
          [](const family::FiniteDiscrete& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.probs[i] > 0.0) acc += f.probs[i] * std::log(std::fabs(f.values[i]));
            return acc;
          },
          [](const family::UniformContinuous& f) {
            // Antiderivative of log|x| is x log|x| - x.
            auto anti = [](double x) { return x == 0.0 ? 0.0 : x * std::log(std::fabs(x)) - x; };
            return (anti(f.hi) - anti(f.lo)) / (f.hi - f.lo);
          },
          [](const family::Exponential& f) { return -std::numbers::egamma - std::log(f.rate); },
          [](const family::Gamma& f) { return bm::digamma(f.shape) - std::log(f.rate); },
          [](const family::Beta& f) { return bm::digamma(f.alpha) - bm::digamma(f.alpha + f.beta); },
          [](const family::Weibull& f) { return std::log(f.scale) - std::numbers::egamma / f.shape; },
          [](const family::InverseGamma& f) { return std::log(f.scale) - bm::digamma(f.shape); },
          [](const family::SignedRademacher& f) { return std::log(f.scale); },
          [](const family::LogPareto& f) { return f.alpha > 1.0 ? f.alpha / (f.alpha - 1.0) : kInf; },
          // Remaining discrete families put mass on 0 and were rejected above.
          [](const auto&) { return std::numeric_limits<double>::quiet_NaN(); },
      },
      law.family());
  return {value, true};
}

double log_plus_abs_mean(const ScalarLaw& law) {
  auto log_plus = [](double x) { return std::max(0.0, std::log(std::fabs(x))); };
  return std::visit(
      overloaded{
          [&](const family::PointMass& f) { return log_plus(f.c); },
          [&](const family::FiniteDiscrete& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (f.probs[i] > 0.0) acc += f.probs[i] * log_plus(f.values[i]);
            return acc;
          },
          [&](const family::UniformContinuous& f) {
            // Integral of log t over [1, x].
            auto part = [](double x) { return x > 1.0 ? x * std::log(x) - x + 1.0 : 0.0; };
            return (part(f.hi) + part(-f.lo)) / (f.hi - f.lo);
          },
          [&](const family::UniformDiscreteRange& f) {
            double acc = 0.0;
            for (std::uint64_t k = 2; k < f.n; ++k) acc += std::log(static_cast<double>(k));
            return acc / static_cast<double>(f.n);
          },
          [&](const family::Poisson& f) {
            return poisson_series(f.mean, [](double k) { return k > 1.0 ? std::log(k) : 0.0; });
          },
          [&](const family::SignedRademacher& f) { return log_plus(f.scale); },
          [&](const family::LogPareto& f) { return f.alpha > 1.0 ? f.alpha / (f.alpha - 1.0) : kInf; },
          [&](const auto&) {
            // E log+|X| = integral over x > 1 of P{|X| > x} / x.
            if (law.upper() <= 1.0 && law.lower() >= -1.0) return 0.0;
            auto tail = [&](double x) { return (law.sf(x) + law.cdf(-x)) / x; };
            const double knee = std::max(std::numbers::e, law.quantile(0.99));
            const std::array<double, 3> breaks{1.0, knee, kInf};
            return quad::integrate_pieces(tail, breaks);
          },
      },
      law.family());
}

double abs_exp_moment_q(const JointLaw& joint, double s) {
  return exp_moment(joint.marginal_q(), s, true);
}

double q_abscissa(const JointLaw& joint) { return exp_abscissa(joint.marginal_q()); }

}  // namespace perpetua
