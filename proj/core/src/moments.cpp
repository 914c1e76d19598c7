#include "perpetua/moments.hpp"

#include "perpetua/errors.hpp"

#include <cmath>
#include <string>

namespace perpetua {

namespace {

void require_nondegenerate(const ExistenceReport& e, const char* op) {
  if (!e.nonzero_ok)
    throw PreconditionError(std::string(op) + ": requires P{M = 0} = 0 and P{Q = 0} < 1");
  if (e.degenerate_at)
    throw PreconditionError(std::string(op) + ": Q + Mc = c a.s. for c = " +
                            std::to_string(*e.degenerate_at));
}

// The boundary predicate in log space, with E e^{s|Q|} < inf.
bool boundary_predicate(const JointLaw& joint, double s, double r_q) {
  if (!(s < r_q)) return false;
  const double la_minus = log_restricted_exp_moment(joint, s, QSign::minus, MAtom::plus_one);
  const double la_plus = log_restricted_exp_moment(joint, s, QSign::plus, MAtom::plus_one);
  if (!(la_minus < 0.0) || !(la_plus < 0.0)) return false;
  const double lb_minus = log_restricted_exp_moment(joint, s, QSign::minus, MAtom::minus_one);
  const double lb_plus = log_restricted_exp_moment(joint, s, QSign::plus, MAtom::minus_one);
  const double lhs = lb_minus + lb_plus;
  if (lhs == -kInf) return true;
  const double rhs = std::log1p(-std::exp(la_minus)) + std::log1p(-std::exp(la_plus));
  return lhs < rhs;
}

}  // namespace

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::all_contracting: return "all-contracting";
    case Regime::boundary: return "boundary";
    case Regime::expanding: return "expanding";
  }
  return "?";
}

double zstar_bound(const JointLaw& joint, double p) {
  if (!(p > 0.0)) throw PreconditionError("zstar_bound: p must be positive");
  const double m = abs_moment(joint.marginal_m(), p);
  const double q = abs_moment(joint.marginal_q(), p);
  if (p <= 1.0) {
    if (!(m < 1.0)) return kInf;
    return q / (1.0 - m);
  }
  const double m_norm = std::pow(m, 1.0 / p);
  if (!(m_norm < 1.0)) return kInf;
  return std::pow(std::pow(q, 1.0 / p) / (1.0 - m_norm), p);
}

MomentReport p_moment_criterion(const JointLaw& joint, double p) {
  if (!(p > 0.0)) throw PreconditionError("p_moment_criterion: p must be positive");
  require_nondegenerate(existence_report(joint), "p_moment_criterion");
  MomentReport r;
  r.p = p;
  r.m_pow = abs_moment(joint.marginal_m(), p);
  r.q_pow = abs_moment(joint.marginal_q(), p);
  r.finite = r.m_pow < 1.0 && r.q_pow < kInf;
  r.zstar_bound = r.finite ? zstar_bound(joint, p) : kInf;
  return r;
}

Regime classify_regime(const JointLaw& joint) {
  const double above = event_prob(joint, Event::abs_m_above_one);
  const double at = event_prob(joint, Event::abs_m_one);
  if (above > 0.0) return Regime::expanding;
  if (at >= 1.0) throw PreconditionError("classify_regime: |M| = 1 a.s.");
  return at > 0.0 ? Regime::boundary : Regime::all_contracting;
}

RestrictedMoments restricted_moments(const JointLaw& joint, double s) {
  RestrictedMoments d;
  d.a_minus = restricted_exp_moment(joint, s, QSign::minus, MAtom::plus_one);
  d.a_plus = restricted_exp_moment(joint, s, QSign::plus, MAtom::plus_one);
  d.b_minus = restricted_exp_moment(joint, s, QSign::minus, MAtom::minus_one);
  d.b_plus = restricted_exp_moment(joint, s, QSign::plus, MAtom::minus_one);
  d.abs_q = abs_exp_moment_q(joint, s);
  return d;
}

Feasibility exp_feasible_at(const JointLaw& joint, double s) {
  if (!(s > 0.0)) throw PreconditionError("exp_feasible_at: s must be positive");
  Feasibility f;
  f.detail = restricted_moments(joint, s);
  if (event_prob(joint, Event::abs_m_one) >= 1.0) return f;
  switch (classify_regime(joint)) {
    case Regime::all_contracting:
      f.feasible = f.detail.abs_q < kInf;
      break;
    case Regime::boundary:
      f.feasible = boundary_predicate(joint, s, q_abscissa(joint));
      break;
    case Regime::expanding:
      f.feasible = false;
      break;
  }
  return f;
}

RStarSearch r_star_search(const JointLaw& joint, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("r_star: tol must be positive");
  if (classify_regime(joint) != Regime::boundary)
    throw PreconditionError("r_star: requires P{|M| = 1} in (0, 1) and P{|M| <= 1} = 1");
  const double r_q = q_abscissa(joint);
  auto ok = [&](double s) { return boundary_predicate(joint, s, r_q); };

  RStarSearch out;
  double lo = 0.0;
  double hi = 1.0;
  if (ok(tol)) {
    lo = tol;
    while (ok(hi)) {
      lo = hi;
      if (hi >= kRStarCap) {
        out.value = kInf;
        return out;
      }
      hi *= 2.0;
    }
  } else {
    hi = tol;
  }
  out.trace.push_back({lo, hi});
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
    out.trace.push_back({lo, hi});
  }
  out.value = 0.5 * (lo + hi);
  return out;
}

double r_star(const JointLaw& joint, double tol) { return r_star_search(joint, tol).value; }

AbscissaResult r_of_perpetuity(const JointLaw& joint) {
  const ExistenceReport e = existence_report(joint);
  require_nondegenerate(e, "r_of_perpetuity");
  if (e.verdict != Verdict::converges_as)
    throw PreconditionError("r_of_perpetuity: perpetuity is not a.s. convergent (verdict: " +
                            std::string(to_string(e.verdict)) + ")");
  AbscissaResult r;
  r.regime = classify_regime(joint);
  r.r_q = q_abscissa(joint);
  switch (r.regime) {
    case Regime::all_contracting:
      r.r_z = r.r_q;
      break;
    case Regime::boundary: {
      RStarSearch search = r_star_search(joint);
      r.r_star = search.value;
      r.trace = std::move(search.trace);
      r.r_z = std::min(r.r_q, search.value);
      if (r.r_z > 0.0 && r.r_z < kInf) r.boundary_detail = restricted_moments(joint, r.r_z);
      break;
    }
    case Regime::expanding:
      r.r_z = 0.0;
      break;
  }
  return r;
}

double exp_example_moment(double a, const ScalarLaw& law_m, unsigned n) {
  if (!(a > 0.0)) throw PreconditionError("exp_example_moment: a must be positive");
  if (n < 1) throw PreconditionError("exp_example_moment: n must be >= 1");
  if (law_m.lower() < 0.0 || law_m.upper() > 1.0)
    throw PreconditionError("exp_example_moment: requires 0 <= M <= 1");
  double result = 1.0;
  for (unsigned k = 1; k <= n; ++k) {
    const double mk = abs_moment(law_m, k);
    if (mk >= 1.0)
      throw PreconditionError("exp_example_moment: E M^" + std::to_string(k) + " = 1");
    result *= static_cast<double>(k) / (a * (1.0 - mk));
  }
  return result;
}

CauchyHadamard cauchy_hadamard_estimate(std::span<const double> moments) {
  const std::size_t n = moments.size();
  if (n < 3) throw PreconditionError("cauchy_hadamard_estimate: need at least 3 moments");
  for (double m : moments)
    if (!(m > 0.0) || !std::isfinite(m))
      throw PreconditionError("cauchy_hadamard_estimate: moments must be finite and positive");
  // a_{k-1} / a_k = k * E Z^{k-1} / E Z^k, with E Z^0 = 1
  auto ratio = [&](std::size_t k) {
    const double prev = k >= 2 ? moments[k - 2] : 1.0;
    return static_cast<double>(k) * prev / moments[k - 1];
  };
  CauchyHadamard out;
  out.last_ratios = {ratio(n - 2), ratio(n - 1), ratio(n)};
  out.estimate = out.last_ratios[2];
  return out;
}

}  // namespace perpetua
