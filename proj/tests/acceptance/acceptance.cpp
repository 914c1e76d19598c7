// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "perpetua/existence.hpp"
#include "perpetua/moments.hpp"
#include "perpetua/oracles.hpp"
#include "perpetua/sampler.hpp"
#include "perpetua/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

using namespace perpetua;

namespace {

constexpr std::uint64_t kN = 100'000;
constexpr std::uint64_t kMomentN = 1'000'000;
constexpr std::uint64_t kSeed = 20240611;

// Pinned tolerances.
constexpr double kTvTol = 0.01;
constexpr double kChiPValue = 0.01;
constexpr double kKsTol = 0.01;
constexpr double kLevyKsTol = 0.015;
constexpr double kCfTol = 0.02;
constexpr double kMeanSigmas = 3.0;
constexpr double kLevyLtTol = 1e-8;
constexpr double kPitmanYorTol = 1e-6;
constexpr double kFixedPointTol = 0.01;
constexpr double kMomentRelTol = 0.05;
constexpr double kMomentSeconds = 120.0;
constexpr double kRStarTol = 1e-6;
constexpr double kRatioTol = 0.10;
constexpr double kBoundSlack = 1.1;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string describe(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    const char* cmp = c.compare == Compare::below ? "<" : c.compare == Compare::above ? ">" : "<=";
    os << (i ? "; " : "") << c.check << " " << c.statistic << " " << cmp << " " << c.threshold;
  }
  return os.str();
}

VerifyOptions options() {
  VerifyOptions o;
  o.seed = kSeed;
  o.n = kN;
  return o;
}

JointLaw cantor_third() {
  return JointLaw::independent(ScalarLaw::point_mass(1.0 / 3.0), ScalarLaw::rademacher(1.0));
}

void geometric() {
  const auto checks = verify_example("geometric", options());
  report(1, "geometric p=0.3", all_pass(checks), describe(checks));
}

void uniform_symmetric() {
  const auto checks = verify_example("uniform-symmetric", options());
  report(2, "uniform symmetric c=1/2", all_pass(checks), describe(checks));
}

void cantor_probe() {
  PerpetuityConfig c{cantor_third()};
  c.seed = kSeed;
  const EmpiricalDistribution z = sample_batch(c, kN);
  const PurityReport r = purity_probe(z, 1.0 / 3.0, 1000.0);
  double tail_max = 0.0;
  for (const auto& g : r.grid)
    if (g.t > kCfTailStart) tail_max = std::max(tail_max, g.modulus);
  const double dev = r.analytic_cf_deviation.value_or(1.0);
  const bool pass = dev < kCfTol && r.cf_decay == CfDecay::persistent;
  std::ostringstream os;
  os << "cf deviation " << dev << " < " << kCfTol << "; classification "
     << to_string(r.cf_decay) << " (max tail modulus " << tail_max << " > " << kCfPersistent << ")";
  report(3, "singularity probe c=1/3", pass, os.str());
}

void gamma_sizebias() {
  const auto checks = verify_example("gamma", options());
  report(4, "gamma size-bias alpha=1", all_pass(checks) && checks[1].threshold == kMeanSigmas,
         describe(checks));
}

void levy_half() {
  const auto checks = verify_example("levy-half", options());
  const bool pinned = checks.size() == 2 && checks[0].threshold == kLevyLtTol &&
                      checks[1].threshold == kLevyKsTol;
  report(5, "levy-half b=1", all_pass(checks) && pinned, describe(checks));
}

void pitman_yor() {
  const double grid[] = {0.5, 1.0, 2.0};
  const double dev = oracle_pitman_yor_identity(grid);
  std::ostringstream os;
  os << "max deviation " << dev << " < " << kPitmanYorTol;
  report(6, "pitman-yor transform identity", dev < kPitmanYorTol, os.str());
}

void fixed_point() {
  const OracleSpec specs[] = {oracle_geometric(0.3), oracle_uniform_symmetric(),
                              OracleSpec{"cantor-third", {{"c", 1.0 / 3.0}}, {}, {}, {}, cantor_third()},
                              oracle_gamma_sizebias(1.0), oracle_levy_half(1.0)};
  bool pass = true;
  std::ostringstream os;
  for (const auto& o : specs) {
    const CheckResult c = check_fixed_point(o, options(), kFixedPointTol);
    pass = pass && c.pass;
    os << o.name << " " << c.statistic << (c.pass ? "" : " (over)") << "; ";
  }
  os << "each < " << kFixedPointTol;
  report(7, "fixed-point residual", pass, os.str());
}

void moment_formula() {
  const ScalarLaw law_m = ScalarLaw::uniform(0.0, 1.0);
  PerpetuityConfig c{JointLaw::independent(law_m, ScalarLaw::exponential(1.0))};
  c.seed = kSeed;
  const auto start = std::chrono::steady_clock::now();
  const EmpiricalDistribution z = sample_batch(c, kMomentN);
  bool pass = true;
  std::ostringstream os;
  for (unsigned n = 1; n <= 3; ++n) {
    const double exact = exp_example_moment(1.0, law_m, n);
    const double closed = std::tgamma(n + 1.0) * (n + 1.0);
    const double rel = std::fabs(empirical_moment(z, n, false) - exact) / exact;
    pass = pass && rel < kMomentRelTol && std::fabs(exact - closed) < 1e-12 * closed;
    os << "E Z^" << n << " = " << exact << " rel err " << rel << "; ";
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass = pass && seconds <= kMomentSeconds;
  os << "tol " << kMomentRelTol << ", " << seconds << " s";
  report(8, "moment formula a=1, M~U(0,1)", pass, os.str());
}

void abscissa() {
  const auto boundary = r_of_perpetuity(JointLaw::independent(
      ScalarLaw::finite_discrete({1.0, 0.5}, {0.5, 0.5}), ScalarLaw::exponential(2.0)));
  const double rs = boundary.r_star.value_or(-1.0);
  const auto contracting = r_of_perpetuity(
      JointLaw::independent(ScalarLaw::uniform(0.0, 1.0), ScalarLaw::exponential(3.0)));
  const auto expanding = r_of_perpetuity(JointLaw::independent(
      ScalarLaw::finite_discrete({2.0, 0.1}, {0.2, 0.8}), ScalarLaw::exponential(1.0)));

  std::vector<double> moments;
  for (unsigned n = 1; n <= 10; ++n) moments.push_back(exp_example_moment(1.0, ScalarLaw::uniform(0.0, 1.0), n));
  const CauchyHadamard ch = cauchy_hadamard_estimate(moments);
  const bool trend = ch.last_ratios[0] < ch.last_ratios[1] && ch.last_ratios[1] < ch.last_ratios[2];

  const bool pass = std::fabs(rs - 1.0) < kRStarTol && std::fabs(boundary.r_z - 1.0) < kRStarTol &&
                    contracting.r_z == 3.0 && expanding.r_z == 0.0 &&
                    std::fabs(ch.estimate - 1.0) < kRatioTol && trend;
  std::ostringstream os;
  os.precision(10);
  os << "(i) r_star " << rs << ", r_Z " << boundary.r_z << "; (ii) r_Z " << contracting.r_z
     << "; (iii) r_Z " << expanding.r_z << "; last ratios " << ch.last_ratios[0] << ", "
     << ch.last_ratios[1] << ", " << ch.last_ratios[2] << " -> 1";
  report(9, "abscissa of convergence", pass, os.str());
}

void moment_criterion() {
  const JointLaw j = JointLaw::independent(ScalarLaw::finite_discrete({3.0, 0.05}, {0.25, 0.75}),
                                           ScalarLaw::exponential(1.0));
  const ExistenceReport e = existence_report(j);
  const MomentReport small = p_moment_criterion(j, 0.1);
  const MomentReport large = p_moment_criterion(j, 2.0);
  PerpetuityConfig c{j};
  c.seed = kSeed;
  const EmpiricalDistribution z = sample_batch(c, kN);
  const double emp = empirical_moment(z, 0.1, true);
  const bool pass = e.pi_to_zero == Tri::yes && small.finite && emp <= small.zstar_bound * kBoundSlack &&
                    !large.finite;
  std::ostringstream os;
  os << "p=0.1 finite=" << small.finite << " E|Z|^0.1 " << emp << " <= " << kBoundSlack << " x "
     << small.zstar_bound << "; p=2 finite=" << large.finite << " (E|M|^2 " << large.m_pow
     << "); pi_to_zero " << to_string(e.pi_to_zero);
  report(10, "p-moment criterion", pass, os.str());
}

void goldie_maller() {
  const ExistenceReport e = existence_report(
      JointLaw::independent(ScalarLaw::uniform(0.0, 1.0), ScalarLaw::log_pareto(0.5)));
  const bool pass = e.verdict == Verdict::diverges_in_probability && e.integral &&
                    e.integral->finiteness == Finiteness::infinite &&
                    e.integral->method == Method::analytic;
  std::ostringstream os;
  os << "verdict " << to_string(e.verdict) << "; I "
     << (e.integral ? to_string(e.integral->finiteness) : "n/a") << " via "
     << (e.integral ? to_string(e.integral->method) : "n/a");
  report(11, "Goldie-Maller divergence", pass, os.str());
}

void reproducibility() {
  const JointLaw j = JointLaw::independent(ScalarLaw::beta(1.0, 1.0), ScalarLaw::gamma(1.0, 1.0));
  bool pass = true;
  std::ostringstream os;
  std::vector<double> first_by_seed;
  for (std::uint64_t seed : {1u, 2u}) {
    PerpetuityConfig c{j};
    c.seed = seed;
    const PerpetuitySampler s(c);
    const EmpiricalDistribution base = sample_batch(s, kN, {1, 0});
    for (unsigned w : {4u, 8u}) {
      const EmpiricalDistribution other = sample_batch(s, kN, {w, 0});
      const bool same = std::memcmp(base.samples().data(), other.samples().data(),
                                    base.size() * sizeof(double)) == 0;
      pass = pass && same;
      os << "seed " << seed << " workers 1 vs " << w << (same ? " identical" : " DIFFER") << "; ";
    }
    first_by_seed.push_back(base.samples()[0]);
  }
  pass = pass && first_by_seed[0] != first_by_seed[1];
  os << "seeds differ " << (first_by_seed[0] != first_by_seed[1]);
  report(12, "determinism across worker counts", pass, os.str());
}

}  // namespace

int main() {
  geometric();
  uniform_symmetric();
  cantor_probe();
  gamma_sizebias();
  levy_half();
  pitman_yor();
  fixed_point();
  moment_formula();
  abscissa();
  moment_criterion();
  goldie_maller();
  reproducibility();
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
