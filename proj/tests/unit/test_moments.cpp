#include "perpetua/errors.hpp"
#include "perpetua/moments.hpp"
#include "perpetua/sampler.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace perpetua;
using doctest::Approx;

namespace {

JointLaw boundary_joint() {
  return JointLaw::independent(ScalarLaw::finite_discrete({1.0, 0.5}, {0.5, 0.5}),
                               ScalarLaw::exponential(2.0));
}

}  // namespace

TEST_CASE("p-moment criterion") {
  const auto r = p_moment_criterion(
      JointLaw::independent(ScalarLaw::point_mass(0.5), ScalarLaw::exponential(1.0)), 1.0);
  CHECK(r.m_pow == Approx(0.5));
  CHECK(r.q_pow == Approx(1.0));
  CHECK(r.finite);
  CHECK(r.zstar_bound == Approx(2.0));

  const JointLaw heavy = JointLaw::independent(ScalarLaw::finite_discrete({3.0, 0.05}, {0.25, 0.75}),
                                               ScalarLaw::exponential(1.0));
  const auto r2 = p_moment_criterion(heavy, 2.0);
  CHECK(r2.m_pow == Approx(2.251875));
  CHECK_FALSE(r2.finite);
  CHECK(r2.zstar_bound == kInf);
  CHECK(p_moment_criterion(heavy, 0.1).finite);

  CHECK_THROWS_AS(p_moment_criterion(JointLaw::independent(ScalarLaw::point_mass(0.5),
                                                           ScalarLaw::point_mass(0.0)),
                                     1.0),
                  PreconditionError);
  CHECK_THROWS_AS(p_moment_criterion(JointLaw::independent(ScalarLaw::point_mass(0.5),
                                                           ScalarLaw::point_mass(1.0)),
                                     1.0),
                  PreconditionError);
  CHECK_THROWS_AS(p_moment_criterion(boundary_joint(), -1.0), PreconditionError);
}

TEST_CASE("Z* bounds") {
  const JointLaw quarter = JointLaw::independent(ScalarLaw::point_mass(0.25), ScalarLaw::point_mass(1.0));
  CHECK(zstar_bound(quarter, 0.5) == Approx(2.0));
  CHECK(std::sqrt(4.0 / 3.0) <= zstar_bound(quarter, 0.5));
  const JointLaw half = JointLaw::independent(ScalarLaw::point_mass(0.5), ScalarLaw::point_mass(1.0));
  CHECK(zstar_bound(half, 2.0) == Approx(4.0));
  CHECK(zstar_bound(JointLaw::independent(ScalarLaw::point_mass(0.5), ScalarLaw::exponential(1.0)),
                    1.0) == Approx(2.0));
  CHECK(zstar_bound(JointLaw::independent(ScalarLaw::point_mass(1.5), ScalarLaw::exponential(1.0)),
                    3.0) == kInf);
}

TEST_CASE("empirical p-moments respect the bound") {
  const JointLaw joints[] = {
      JointLaw::independent(ScalarLaw::beta(1.0, 1.0), ScalarLaw::exponential(1.0)),
      JointLaw::independent(ScalarLaw::finite_discrete({3.0, 0.05}, {0.25, 0.75}),
                            ScalarLaw::exponential(1.0)),
      JointLaw::finite_joint({{0.5, 1.0, 0.5}, {-0.5, -2.0, 0.5}}),
  };
  for (const auto& j : joints) {
    PerpetuityConfig c{j};
    c.seed = 11;
    const auto emp = sample_batch(c, 100'000);
    for (double p : {0.1, 0.5, 1.0, 2.0}) {
      const auto r = p_moment_criterion(j, p);
      if (!r.finite) continue;
      INFO("p=" << p);
      CHECK(empirical_moment(emp, p, true) <= r.zstar_bound * 1.1);
    }
  }
}

TEST_CASE("regimes and abscissae") {
  const auto a = r_of_perpetuity(
      JointLaw::independent(ScalarLaw::beta(1.0, 1.0), ScalarLaw::exponential(3.0)));
  CHECK(a.regime == Regime::all_contracting);
  CHECK(a.r_z == 3.0);
  CHECK_FALSE(a.r_star);

  const auto b = r_of_perpetuity(boundary_joint());
  CHECK(b.regime == Regime::boundary);
  REQUIRE(b.r_star);
  CHECK(std::fabs(*b.r_star - 1.0) < 1e-6);
  CHECK(b.r_z == Approx(1.0).epsilon(1e-8));
  CHECK(b.at_abscissa == Tri::unknown);
  CHECK_FALSE(b.trace.empty());
  REQUIRE(b.boundary_detail);
  CHECK(b.boundary_detail->a_plus == Approx(1.0).epsilon(1e-6));

  const auto c = r_of_perpetuity(JointLaw::independent(
      ScalarLaw::finite_discrete({2.0, 0.1}, {0.2, 0.8}), ScalarLaw::exponential(1.0)));
  CHECK(c.regime == Regime::expanding);
  CHECK(c.r_z == 0.0);

  CHECK_THROWS_AS(r_of_perpetuity(JointLaw::independent(ScalarLaw::point_mass(1.0),
                                                        ScalarLaw::exponential(1.0))),
                  PreconditionError);
}

TEST_CASE("r_star") {
  CHECK(std::fabs(r_star(boundary_joint()) - 1.0) < 1e-8);
  const JointLaw flat = JointLaw::independent(ScalarLaw::finite_discrete({-1.0, 0.5}, {0.3, 0.7}),
                                              ScalarLaw::point_mass(1.0));
  CHECK(r_star(flat) == kInf);
  CHECK_THROWS_AS(r_star(JointLaw::independent(ScalarLaw::beta(1.0, 1.0), ScalarLaw::exponential(1.0))),
                  PreconditionError);
  // theta = 0.25: r* = a (1 - theta)
  const JointLaw theta = JointLaw::independent(ScalarLaw::finite_discrete({1.0, 0.3}, {0.25, 0.75}),
                                               ScalarLaw::exponential(4.0));
  CHECK(r_star(theta) == Approx(3.0).epsilon(1e-8));
}

TEST_CASE("feasibility") {
  CHECK(exp_feasible_at(JointLaw::independent(ScalarLaw::beta(1.0, 1.0), ScalarLaw::exponential(2.0)),
                        1.0)
            .feasible);
  const auto ok = exp_feasible_at(boundary_joint(), 0.5);
  CHECK(ok.feasible);
  CHECK(ok.detail.a_plus == Approx(2.0 / 3.0));
  CHECK(ok.detail.b_plus == 0.0);
  CHECK_FALSE(exp_feasible_at(boundary_joint(), 1.5).feasible);
  CHECK_FALSE(exp_feasible_at(JointLaw::independent(ScalarLaw::finite_discrete({2.0, 0.1}, {0.2, 0.8}),
                                                    ScalarLaw::exponential(1.0)),
                              0.1)
                  .feasible);
}

TEST_CASE("feasible sets are intervals and contain the sufficient region") {
  const JointLaw joints[] = {
      boundary_joint(),
      JointLaw::finite_joint({{1.0, 1.0, 0.2}, {-1.0, -0.5, 0.2}, {0.5, 2.0, 0.6}}),
      JointLaw::finite_joint({{-1.0, 1.0, 0.4}, {0.2, -1.0, 0.6}}),
  };
  for (const auto& j : joints) {
    bool seen_infeasible = false;
    for (double s = 0.05; s < 6.0; s += 0.05) {
      const auto f = exp_feasible_at(j, s);
      if (seen_infeasible) REQUIRE_FALSE(f.feasible);
      seen_infeasible = seen_infeasible || !f.feasible;
      const auto& d = f.detail;
      if (std::max(d.a_minus + d.b_minus, d.a_plus + d.b_plus) < 1.0 && d.abs_q < kInf)
        REQUIRE(f.feasible);
    }
  }
}

TEST_CASE("exponential example moments") {
  const ScalarLaw u = ScalarLaw::beta(1.0, 1.0);
  CHECK(exp_example_moment(1.0, u, 1) == Approx(2.0));
  CHECK(exp_example_moment(1.0, u, 2) == Approx(6.0));
  CHECK(exp_example_moment(1.0, u, 3) == Approx(24.0));
  CHECK(exp_example_moment(2.0, ScalarLaw::point_mass(0.0), 3) == Approx(6.0 / 8.0));
  CHECK_THROWS_AS(exp_example_moment(1.0, ScalarLaw::point_mass(1.0), 1), PreconditionError);
  CHECK_THROWS_AS(exp_example_moment(1.0, ScalarLaw::uniform(0.0, 2.0), 1), PreconditionError);

  RandomStream rng(77, 0);
  for (int i = 0; i < 20; ++i) {
    const double a = 0.2 + 5.0 * rng.uniform();
    const ScalarLaw m = ScalarLaw::beta(0.2 + 3.0 * rng.uniform(), 0.2 + 3.0 * rng.uniform());
    const double mean_m = abs_moment(m, 1.0);
    CHECK(std::fabs(exp_example_moment(a, m, 1) - (1.0 / a) / (1.0 - mean_m)) < 1e-12);
  }
}

TEST_CASE("Cauchy-Hadamard ratios") {
  std::vector<double> moments;
  for (unsigned n = 1; n <= 10; ++n) moments.push_back(exp_example_moment(1.0, ScalarLaw::beta(1.0, 1.0), n));
  const auto ch = cauchy_hadamard_estimate(moments);
  CHECK(ch.estimate == Approx(10.0 / 11.0));
  CHECK(ch.last_ratios[0] < ch.last_ratios[1]);
  CHECK(ch.last_ratios[1] < ch.last_ratios[2]);

  // a_n = c rho^n
  std::vector<double> geo;
  double fact = 1.0;
  for (unsigned n = 1; n <= 6; ++n) {
    fact *= n;
    geo.push_back(3.0 * std::pow(0.4, n) * fact);
  }
  CHECK(cauchy_hadamard_estimate(geo).estimate == Approx(2.5));

  // M in {1: theta, beta: 1 - theta}: ratios tend to a (1 - theta)
  const ScalarLaw m = ScalarLaw::finite_discrete({1.0, 0.5}, {0.3, 0.7});
  std::vector<double> seq;
  for (unsigned n = 1; n <= 60; ++n) seq.push_back(exp_example_moment(2.0, m, n));
  CHECK(cauchy_hadamard_estimate(seq).estimate == Approx(2.0 * 0.7).epsilon(1e-3));

  const std::vector<double> bad{1.0, -1.0, 2.0};
  CHECK_THROWS_AS(cauchy_hadamard_estimate(bad), PreconditionError);
  const std::vector<double> shorter{1.0, 2.0};
  CHECK_THROWS_AS(cauchy_hadamard_estimate(shorter), PreconditionError);
}
