#include "perpetua/existence.hpp"

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace perpetua {

namespace {

constexpr double kDegeneracyTol = 1e-12;

}  // namespace

std::string_view to_string(Tri v) noexcept {
  switch (v) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Finiteness v) noexcept {
  switch (v) {
    case Finiteness::finite: return "finite";
    case Finiteness::infinite: return "infinite";
    case Finiteness::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Method v) noexcept {
  return v == Method::analytic ? "analytic" : "monte-carlo-heuristic";
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::converges_as: return "converges-a.s.";
    case Verdict::diverges_in_probability: return "diverges-in-probability";
    case Verdict::trivial_degenerate: return "trivial-degenerate";
    case Verdict::exact_stop: return "exact-stop";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

double a_of_x(const ScalarLaw& law_m, double x) {
  if (!(x >= 0.0)) throw PreconditionError("A(x): x must be >= 0");
  if (law_m.atom(0.0) > 0.0) throw PreconditionError("A(x): P{M = 0} > 0");
  if (x == 0.0) return 0.0;

  if (law_m.is_discrete() && !std::holds_alternative<family::Poisson>(law_m.family())) {
    // Every non-Poisson discrete family has finitely many atoms.
    double acc = 0.0;
    auto add = [&](double v, double p) {
      if (p > 0.0) acc += p * std::min(std::max(0.0, -std::log(std::fabs(v))), x);
    };
    std::visit(
        [&](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, family::PointMass>) {
            add(f.c, 1.0);
          } else if constexpr (std::is_same_v<F, family::FiniteDiscrete>) {
            for (std::size_t i = 0; i < f.values.size(); ++i) add(f.values[i], f.probs[i]);
          } else if constexpr (std::is_same_v<F, family::SignedRademacher>) {
            add(f.scale, 1.0);
          } else if constexpr (std::is_same_v<F, family::UniformDiscreteRange>) {
            // n >= 2 puts mass on 0 (rejected); n = 1 is the point 0 as well.
          }
        },
        law_m.family());
    return acc;
  }
  // Poisson puts mass e^-mean on 0 and was rejected above; the rest are
  // continuous, so P{|M| < t} = cdf(t) - cdf(-t).
  auto integrand = [&](double y) {
    const double t = std::exp(-y);
    return std::clamp(law_m.cdf(t) - law_m.cdf(-t), 0.0, 1.0);
  };
  std::vector<double> breaks{0.0};
  for (double b = 1.0; b < x; b *= 2.0) breaks.push_back(b);
  breaks.push_back(x);
  return quad::integrate_pieces(integrand, breaks);
}

Tri pi_to_zero_verdict(const ScalarLaw& law_m) {
  if (law_m.atom(0.0) > 0.0) return Tri::yes;
  const LogMoment lm = log_abs_moment_mean(law_m);
  if (!lm.defined || std::isnan(lm.value)) return Tri::unknown;
  return lm.value < 0.0 ? Tri::yes : Tri::no;
}

IntegralVerdict gm_integral_verdict(const JointLaw& joint) {
  if (pi_to_zero_verdict(joint.marginal_m()) != Tri::yes)
    throw PreconditionError("gm_integral_verdict: requires Pi_n -> 0 a.s.");
  const double log_plus = log_plus_abs_mean(joint.marginal_q());
  IntegralVerdict v;
  v.method = Method::analytic;
  v.statistic = log_plus;
  v.finiteness = std::isfinite(log_plus) ? Finiteness::finite : Finiteness::infinite;
  return v;
}

IntegralVerdict gm_integral_monte_carlo(const JointLaw& joint,
                                        const MonteCarloIntegralOptions& options) {
  if (pi_to_zero_verdict(joint.marginal_m()) != Tri::yes)
    throw PreconditionError("gm_integral_verdict: requires Pi_n -> 0 a.s.");
  if (options.draws < 64) throw PreconditionError("gm_integral_monte_carlo: too few draws");

  const ScalarLaw& m = joint.marginal_m();
  const ScalarLaw& q = joint.marginal_q();
  RandomStream rng(options.seed, 0);

  // (log|Q|, draw index) over draws with |Q| > 1
  std::vector<std::pair<double, std::uint64_t>> log_tail;
  for (std::uint64_t i = 0; i < options.draws; ++i) {
    const double x = std::fabs(sample_scalar(q, rng));
    if (x > 1.0) log_tail.emplace_back(std::log(x), i);
  }
  if (log_tail.empty()) return {Finiteness::finite, Method::monte_carlo_heuristic, 0.0};
  std::sort(log_tail.begin(), log_tail.end());

  // Contributions log x / A(log x). A is nondecreasing, so it is refreshed
  // only when log x has grown by 1%.
  std::vector<double> contrib;
  contrib.reserve(log_tail.size());
  double a_at = -1.0;
  double a_value = 0.0;
  for (const auto& entry : log_tail) {
    const double y = entry.first;
    if (!std::isfinite(y)) {
      contrib.push_back(kInf);
      continue;
    }
    if (a_at < 0.0 || y > a_at * 1.01) {
      a_at = y;
      a_value = a_of_x(m, y);
    }
    contrib.push_back(a_value > 0.0 ? y / a_value : kInf);
  }

  double total = 0.0;
  double largest = 0.0;
  double first_half = 0.0;
  for (std::size_t i = 0; i < contrib.size(); ++i) {
    total += contrib[i];
    largest = std::max(largest, contrib[i]);
    if (log_tail[i].second < options.draws / 2) first_half += contrib[i];
  }
  IntegralVerdict v{Finiteness::unknown, Method::monte_carlo_heuristic,
                    total / static_cast<double>(options.draws)};
  // A sum dominated by its largest term has not settled; one whose first
  // half-sample agrees with the whole and whose largest term is small has.
  if (!std::isfinite(total) || largest > 0.5 * total) {
    v.finiteness = Finiteness::infinite;
  } else if (std::fabs(2.0 * first_half - total) <= 0.1 * total && largest <= 0.05 * total) {
    v.finiteness = Finiteness::finite;
  }
  return v;
}

std::optional<double> degeneracy_scan(const JointLaw& joint) {
  if (const auto* ind = std::get_if<JointLaw::Independent>(&joint.coupling())) {
    const auto q_const = ind->q.constant();
    if (q_const && *q_const == 0.0) return 0.0;
    const auto m_const = ind->m.constant();
    if (!m_const || !q_const) return std::nullopt;
    if (*m_const == 1.0) return std::nullopt;  // Q = 0 handled above
    return *q_const / (1.0 - *m_const);
  }
  std::optional<double> c;
  for (const auto& a : std::get<JointLaw::FiniteJoint>(joint.coupling()).atoms) {
    if (a.prob <= 0.0) continue;
    if (a.m == 1.0) {
      if (a.q != 0.0) return std::nullopt;
      continue;
    }
    const double candidate = a.q / (1.0 - a.m);
    if (!c) {
      c = candidate;
    } else if (std::fabs(*c - candidate) > kDegeneracyTol) {
      return std::nullopt;
    }
  }
  return c ? c : std::optional<double>(0.0);
}

ExistenceReport existence_report(const JointLaw& joint) {
  ExistenceReport r;
  r.p_m_zero = event_prob(joint, Event::m_zero);
  r.p_q_zero = event_prob(joint, Event::q_zero);
  r.nonzero_ok = r.p_m_zero == 0.0 && r.p_q_zero < 1.0;
  r.degenerate_at = degeneracy_scan(joint);

  if (r.p_q_zero >= 1.0) {
    r.pi_to_zero = r.p_m_zero > 0.0 ? Tri::yes : pi_to_zero_verdict(joint.marginal_m());
    r.verdict = Verdict::trivial_degenerate;
    return r;
  }
  if (r.p_m_zero > 0.0) {
    r.pi_to_zero = Tri::yes;
    r.verdict = Verdict::exact_stop;
    return r;
  }

  const LogMoment lm = log_abs_moment_mean(joint.marginal_m());
  if (lm.defined) r.log_abs_m_mean = lm.value;
  r.pi_to_zero = pi_to_zero_verdict(joint.marginal_m());
  if (r.pi_to_zero == Tri::yes) r.integral = gm_integral_verdict(joint);

  if (r.degenerate_at) {
    r.verdict = Verdict::trivial_degenerate;
    return r;
  }
  if (r.pi_to_zero == Tri::no ||
      (r.integral && r.integral->finiteness == Finiteness::infinite)) {
    r.verdict = Verdict::diverges_in_probability;
  } else if (r.pi_to_zero == Tri::yes && r.integral &&
             r.integral->finiteness == Finiteness::finite) {
    r.verdict = Verdict::converges_as;
  } else {
    r.verdict = Verdict::unknown;
  }
  return r;
}

}  // namespace perpetua
