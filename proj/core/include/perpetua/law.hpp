#pragma once

#include "perpetua/random_stream.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace perpetua {

// Extended reals are plain doubles: +inf is a value, never an error.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace family {

struct PointMass {
  double c;
  bool operator==(const PointMass&) const = default;
};
struct FiniteDiscrete {
  std::vector<double> values;
  std::vector<double> probs;
  bool operator==(const FiniteDiscrete&) const = default;
};
struct UniformContinuous {
  double lo, hi;
  bool operator==(const UniformContinuous&) const = default;
};
// Uniform on {0, 1, ..., n-1}.
struct UniformDiscreteRange {
  std::uint64_t n;
  bool operator==(const UniformDiscreteRange&) const = default;
};
struct Exponential {
  double rate;
  bool operator==(const Exponential&) const = default;
};
struct Gamma {
  double shape, rate;
  bool operator==(const Gamma&) const = default;
};
struct Beta {
  double alpha, beta;
  bool operator==(const Beta&) const = default;
};
struct Weibull {
  double shape, scale;
  bool operator==(const Weibull&) const = default;
};
struct Poisson {
  double mean;
  bool operator==(const Poisson&) const = default;
};
// Density scale^shape / Gamma(shape) * x^(-shape-1) * exp(-scale/x).
struct InverseGamma {
  double shape, scale;
  bool operator==(const InverseGamma&) const = default;
};
// +-scale with probability 1/2 each.
struct SignedRademacher {
  double scale;
  bool operator==(const SignedRademacher&) const = default;
};
// X = exp(W) with P{W > w} = w^-alpha for w >= 1.
struct LogPareto {
  double alpha;
  bool operator==(const LogPareto&) const = default;
};

}  // namespace family

// Law of a real random variable drawn from a closed set of parametric
// families. Immutable; parameters are validated on construction.
class ScalarLaw {
 public:
  using Family = std::variant<family::PointMass, family::FiniteDiscrete, family::UniformContinuous,
                              family::UniformDiscreteRange, family::Exponential, family::Gamma,
                              family::Beta, family::Weibull, family::Poisson,
                              family::InverseGamma, family::SignedRademacher, family::LogPareto>;

  static ScalarLaw point_mass(double c);
  static ScalarLaw finite_discrete(std::vector<double> values, std::vector<double> probs);
  static ScalarLaw uniform(double lo, double hi);
  static ScalarLaw uniform_discrete(std::uint64_t n);
  static ScalarLaw exponential(double rate);
  static ScalarLaw gamma(double shape, double rate);
  static ScalarLaw beta(double alpha, double beta);
  static ScalarLaw weibull(double shape, double scale);
  static ScalarLaw poisson(double mean);
  static ScalarLaw inverse_gamma(double shape, double scale);
  static ScalarLaw rademacher(double scale);
  static ScalarLaw log_pareto(double alpha);

  const Family& family() const noexcept { return family_; }
  std::string_view family_name() const noexcept;

  bool is_discrete() const noexcept;
  // P{X <= x}
  double cdf(double x) const;
  // P{X > x}, computed directly rather than as 1 - cdf where that loses digits.
  double sf(double x) const;
  // P{X = x}; zero for continuous families.
  double atom(double x) const;
  // Lebesgue density; throws PreconditionError for discrete families.
  double pdf(double x) const;
  // Support hull [lower, upper]; either end may be infinite.
  double lower() const noexcept;
  double upper() const noexcept;
  // The value c when P{X = c} = 1.
  std::optional<double> constant() const;
  // Smallest x with cdf(x) >= q, by bisection (used for quadrature breaks).
  double quantile(double q) const;

  bool operator==(const ScalarLaw&) const = default;

 private:
  explicit ScalarLaw(Family f);
  friend double sample_scalar(const ScalarLaw&, RandomStream&);

  Family family_;
  std::vector<double> cumulative_;  // FiniteDiscrete only
};

struct PairDraw {
  double m;
  double q;
};

struct JointAtom {
  double m;
  double q;
  double prob;
  bool operator==(const JointAtom&) const = default;
};

// Joint law of (M, Q): either independent marginals or finitely many atoms.
class JointLaw {
 public:
  struct Independent {
    ScalarLaw m;
    ScalarLaw q;
    bool operator==(const Independent&) const = default;
  };
  struct FiniteJoint {
    std::vector<JointAtom> atoms;
    bool operator==(const FiniteJoint&) const = default;
  };
  using Coupling = std::variant<Independent, FiniteJoint>;

  static JointLaw independent(ScalarLaw m, ScalarLaw q);
  static JointLaw finite_joint(std::vector<JointAtom> atoms);

  const Coupling& coupling() const noexcept { return coupling_; }
  bool is_independent() const noexcept { return std::holds_alternative<Independent>(coupling_); }

  // Marginal laws; FiniteJoint marginals are finite-discrete with merged atoms.
  const ScalarLaw& marginal_m() const noexcept { return marginal_m_; }
  const ScalarLaw& marginal_q() const noexcept { return marginal_q_; }

  bool operator==(const JointLaw& other) const { return coupling_ == other.coupling_; }

 private:
  JointLaw(Coupling coupling, ScalarLaw m, ScalarLaw q);

  Coupling coupling_;
  ScalarLaw marginal_m_;
  ScalarLaw marginal_q_;
  std::vector<double> cumulative_;  // FiniteJoint only
  friend PairDraw sample_joint(const JointLaw&, PairStream&);
};

enum class QSign { plus, minus };
enum class MAtom { plus_one, minus_one };

enum class Event {
  m_zero,             // M = 0
  m_one,              // M = 1
  m_minus_one,        // M = -1
  abs_m_one,          // |M| = 1
  abs_m_below_one,    // |M| < 1
  abs_m_at_most_one,  // |M| <= 1
  abs_m_above_one,    // |M| > 1
  q_zero,             // Q = 0
};

struct LogMoment {
  double value;  // may be -inf or +inf
  bool defined;  // false when both log+ and log- parts are infinite
};

double sample_scalar(const ScalarLaw& law, RandomStream& stream);
PairDraw sample_joint(const JointLaw& joint, PairStream& streams);

// E|X|^p, closed form per family; +inf when infinite. Rejects p <= 0.
double abs_moment(const ScalarLaw& law, double p);
// E|X|^p by adaptive quadrature of |x|^p against the density. Discrete
// families fall back to their exact sums.
double abs_moment_quadrature(const ScalarLaw& law, double p);

// log E e^{sX} (or log E e^{s|X|}); +inf outside the domain of finiteness.
double log_exp_moment(const ScalarLaw& law, double s, bool of_abs = false);
// E e^{sX} (or E e^{s|X|}). Values beyond the double range read as +inf.
double exp_moment(const ScalarLaw& law, double s, bool of_abs = false);

// r(X) = sup{r > 0 : E e^{r|X|} < inf}:
//   bounded families, Poisson, Weibull with shape > 1 -> +inf
//   Exponential(rate), Gamma(shape, rate) -> rate
//   Weibull(shape = 1, scale) -> 1 / scale; shape < 1 -> 0
//   InverseGamma, LogPareto -> 0
double exp_abscissa(const ScalarLaw& law);

// a+-(s) = E e^{+-sQ} 1{M = 1} (m_atom = plus_one) and
// b+-(s) = E e^{+-sQ} 1{M = -1} (m_atom = minus_one). Rejects s < 0.
double restricted_exp_moment(const JointLaw& joint, double s, QSign q_sign, MAtom m_atom);
// Natural log of the same quantity; -inf when the event has probability 0.
double log_restricted_exp_moment(const JointLaw& joint, double s, QSign q_sign, MAtom m_atom);

double event_prob(const JointLaw& joint, Event event);

// E log|M|. Throws PreconditionError when P{M = 0} > 0.
LogMoment log_abs_moment_mean(const ScalarLaw& law);
// E log+|X| (possibly +inf).
double log_plus_abs_mean(const ScalarLaw& law);

// E e^{s|Q|} under the joint law, and r(Q).
double abs_exp_moment_q(const JointLaw& joint, double s);
double q_abscissa(const JointLaw& joint);

}  // namespace perpetua
