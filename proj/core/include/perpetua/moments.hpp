#pragma once

#include "perpetua/existence.hpp"
#include "perpetua/law.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace perpetua {

struct MomentReport {
  double p = 0.0;
  double m_pow = 0.0;  // E|M|^p
  double q_pow = 0.0;  // E|Q|^p
  bool finite = false;
  double zstar_bound = kInf;  // bound on E (Z*)^p, Z* = sum |Pi_{k-1} Q_k|
};

// E|Z|^p < inf iff E|M|^p < 1 and E|Q|^p < inf. Requires P{M = 0} = 0,
// P{Q = 0} < 1 and no c with Q + Mc = c a.s.; throws PreconditionError otherwise.
MomentReport p_moment_criterion(const JointLaw& joint, double p);

// E|Q|^p / (1 - E|M|^p) for p <= 1, (||Q||_p / (1 - ||M||_p))^p for p > 1;
// +inf when the denominator is not positive.
double zstar_bound(const JointLaw& joint, double p);

enum class Regime {
  all_contracting,  // P{|M| < 1} = 1
  boundary,         // P{|M| = 1} in (0, 1), P{|M| <= 1} = 1
  expanding,        // P{|M| > 1} > 0
};
std::string_view to_string(Regime r) noexcept;

// Throws PreconditionError when P{|M| = 1} = 1.
Regime classify_regime(const JointLaw& joint);

struct RestrictedMoments {
  double a_minus = 0.0;  // E e^{-sQ} 1{M = 1}
  double a_plus = 0.0;   // E e^{+sQ} 1{M = 1}
  double b_minus = 0.0;  // E e^{-sQ} 1{M = -1}
  double b_plus = 0.0;   // E e^{+sQ} 1{M = -1}
  double abs_q = 0.0;    // E e^{s|Q|}
};

RestrictedMoments restricted_moments(const JointLaw& joint, double s);

struct Feasibility {
  bool feasible = false;
  RestrictedMoments detail;
};

// Whether E e^{s|Z|} < inf:
//   all-contracting: E e^{s|Q|} < inf
//   boundary: additionally a-, a+ < 1 and b- b+ < (1 - a-)(1 - a+)
//   expanding: never
Feasibility exp_feasible_at(const JointLaw& joint, double s);

struct BisectionStep {
  double lo;
  double hi;
};

struct RStarSearch {
  double value = 0.0;  // +inf when the boundary predicate never fails
  std::vector<BisectionStep> trace;
};

// sup{s > 0 : boundary predicate holds}, by bracket doubling from [tol, 1]
// (capped at kRStarCap) and bisection to absolute tolerance tol.
// Requires the boundary regime.
inline constexpr double kRStarCap = 1e4;
RStarSearch r_star_search(const JointLaw& joint, double tol = 1e-9);
double r_star(const JointLaw& joint, double tol = 1e-9);

struct AbscissaResult {
  Regime regime = Regime::all_contracting;
  double r_q = 0.0;
  std::optional<double> r_star;  // boundary regime only
  double r_z = 0.0;
  std::optional<RestrictedMoments> boundary_detail;  // at r_z, when finite and positive
  std::vector<BisectionStep> trace;
  Tri at_abscissa = Tri::unknown;  // finiteness of E e^{r_z |Z|}
};

// r(Z) = r(Q) (all-contracting), min(r(Q), r*) (boundary), 0 (expanding).
// Requires an a.s. convergent perpetuity with P{M = 0} = 0 and no
// degenerate point.
AbscissaResult r_of_perpetuity(const JointLaw& joint);

// E Z^n = n! / (a^n prod_{k <= n} (1 - E M^k)) for Q ~ Exponential(a)
// independent of M with 0 <= M <= 1.
double exp_example_moment(double a, const ScalarLaw& law_m, unsigned n);

struct CauchyHadamard {
  double estimate = 0.0;             // a_{N-1} / a_N
  std::array<double, 3> last_ratios{};  // a_{n-1} / a_n for n = N-2, N-1, N
};

// moments = [E Z^1, ..., E Z^N], N >= 3, all positive; a_n = E Z^n / n!.
CauchyHadamard cauchy_hadamard_estimate(std::span<const double> moments);

}  // namespace perpetua
