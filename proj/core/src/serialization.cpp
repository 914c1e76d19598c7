#include "perpetua/serialization.hpp"

#include <cmath>
#include <string>

namespace perpetua {

using nlohmann::json;

json extended_real(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json to_json(const IntegralVerdict& v) {
  return {{"finiteness", to_string(v.finiteness)},
          {"method", to_string(v.method)},
          {"statistic", extended_real(v.statistic)}};
}

json to_json(const ExistenceReport& r) {
  json j{{"verdict", to_string(r.verdict)},
         {"nonzero_ok", r.nonzero_ok},
         {"pi_to_zero", {{"value", to_string(r.pi_to_zero)}, {"method", "analytic"}}},
         {"p_m_zero", r.p_m_zero},
         {"p_q_zero", r.p_q_zero}};
  j["integral"] = r.integral ? to_json(*r.integral) : json(nullptr);
  j["degenerate_at"] = r.degenerate_at ? extended_real(*r.degenerate_at) : json(nullptr);
  j["log_abs_m_mean"] = r.log_abs_m_mean ? extended_real(*r.log_abs_m_mean) : json(nullptr);
  return j;
}

json to_json(const MomentReport& r) {
  return {{"p", r.p},
          {"m_pow", extended_real(r.m_pow)},
          {"q_pow", extended_real(r.q_pow)},
          {"finite", r.finite},
          {"zstar_bound", extended_real(r.zstar_bound)},
          {"method", "analytic"}};
}

json to_json(const RestrictedMoments& d) {
  return {{"a_minus", extended_real(d.a_minus)},
          {"a_plus", extended_real(d.a_plus)},
          {"b_minus", extended_real(d.b_minus)},
          {"b_plus", extended_real(d.b_plus)},
          {"abs_q", extended_real(d.abs_q)}};
}

json to_json(const AbscissaResult& r) {
  json trace = json::array();
  for (const auto& step : r.trace) trace.push_back({step.lo, step.hi});
  json j{{"regime", to_string(r.regime)},
         {"r_q", extended_real(r.r_q)},
         {"r_z", extended_real(r.r_z)},
         {"at_abscissa", to_string(r.at_abscissa)},
         {"bisection_trace", std::move(trace)},
         {"method", "analytic"}};
  j["r_star"] = r.r_star ? extended_real(*r.r_star) : json(nullptr);
  j["boundary_detail"] = r.boundary_detail ? to_json(*r.boundary_detail) : json(nullptr);
  return j;
}

json to_json(const Provenance& p) {
  return {{"seed", p.seed},
          {"first_stream_id", p.first_stream_id},
          {"stream_count", p.stream_count},
          {"epsilon", p.epsilon},
          {"max_terms", p.max_terms},
          {"exact_count", p.exact_count},
          {"truncated_count", p.truncated_count},
          {"exhausted_count", p.exhausted_count},
          {"mean_terms", p.mean_terms}};
}

json to_json(const Atom& a) { return {{"value", a.value}, {"prob", a.prob}}; }

json to_json(const PurityReport& r) {
  json atoms = json::array();
  for (const auto& a : r.atoms) atoms.push_back(to_json(a));
  json grid = json::array();
  for (const auto& g : r.grid) grid.push_back({g.t, g.modulus});
  json j{{"atoms", std::move(atoms)},
         {"cf_decay", to_string(r.cf_decay)},
         {"cf_grid", std::move(grid)},
         {"method", r.method}};
  j["analytic_cf_deviation"] =
      r.analytic_cf_deviation ? json(*r.analytic_cf_deviation) : json(nullptr);
  return j;
}

json to_json(const CheckResult& c) {
  const char* cmp = c.compare == Compare::below ? "<" : c.compare == Compare::above ? ">" : "<=";
  return {{"oracle", c.oracle},
          {"check", c.check},
          {"params", c.params},
          {"statistic", extended_real(c.statistic)},
          {"threshold", c.threshold},
          {"compare", cmp},
          {"pass", c.pass}};
}

}  // namespace perpetua
