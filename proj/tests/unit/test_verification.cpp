#include "perpetua/errors.hpp"
#include "perpetua/serialization.hpp"
#include "perpetua/verification.hpp"

#include <doctest.h>

#include <cmath>

using namespace perpetua;
using doctest::Approx;

TEST_CASE("check comparison semantics") {
  CHECK(make_check("o", "c", {}, 0.5, 1.0, Compare::below).pass);
  CHECK_FALSE(make_check("o", "c", {}, 1.0, 1.0, Compare::below).pass);
  CHECK(make_check("o", "c", {}, 0.0, 0.0, Compare::at_most).pass);
  CHECK(make_check("o", "c", {}, 0.2, 0.01, Compare::above).pass);
  CHECK_FALSE(make_check("o", "c", {}, std::nan(""), 1.0, Compare::below).pass);
}

TEST_CASE("total variation against a pmf") {
  const auto pmf = [](double k) { return k == 1.0 || k == 2.0 ? 0.5 : 0.0; };
  CHECK(tv_distance_pmf(EmpiricalDistribution({1.0, 2.0}), pmf) == Approx(0.0));
  CHECK(tv_distance_pmf(EmpiricalDistribution({1.0, 1.0}), pmf) == Approx(0.5));
  CHECK(tv_distance_pmf(EmpiricalDistribution({3.0, 3.0}), pmf) == Approx(1.0));
  CHECK(tv_distance_pmf(EmpiricalDistribution({1.5, 2.0}), pmf) == Approx(0.5));
}

TEST_CASE("chi-square goodness of fit") {
  // exact frequencies give a zero statistic
  std::vector<double> xs;
  for (int i = 0; i < 500; ++i) xs.push_back(1.0);
  for (int i = 0; i < 300; ++i) xs.push_back(2.0);
  for (int i = 0; i < 200; ++i) xs.push_back(3.0);
  const auto pmf = [](double k) { return k == 1.0 ? 0.5 : k == 2.0 ? 0.3 : k == 3.0 ? 0.2 : 0.0; };
  const ChiSquare c = chi_square_gof(EmpiricalDistribution(xs), pmf);
  CHECK(c.statistic == Approx(0.0));
  CHECK(c.p_value == Approx(1.0));
  CHECK(c.dof == 2);

  std::vector<double> skew(xs.size(), 1.0);
  CHECK(chi_square_gof(EmpiricalDistribution(skew), pmf).p_value < 1e-10);
}

TEST_CASE("example registry") {
  CHECK(example_names().size() == 8);
  CHECK(is_example("gamma"));
  CHECK_FALSE(is_example("bogus"));
  CHECK_THROWS_AS(verify_example("bogus", {}), PreconditionError);
  const auto py = verify_example("pitman-yor", {});
  REQUIRE(py.size() == 1);
  CHECK(py[0].pass);
  const auto ab = verify_example("abscissa-boundary", {});
  CHECK(all_pass(ab));
}

TEST_CASE("sampled examples pass at a reduced size") {
  VerifyOptions opts;
  opts.seed = 3;
  opts.n = 100'000;
  CHECK(all_pass(verify_example("geometric", opts)));
  CHECK(all_pass(verify_example("gamma", opts)));
  CHECK(check_fixed_point(oracle_gamma_sizebias(1.0), opts).pass);
}

TEST_CASE("json serialization") {
  CHECK(extended_real(kInf) == "inf");
  CHECK(extended_real(-kInf) == "-inf");
  CHECK(extended_real(std::nan("")).is_null());
  CHECK(extended_real(1.5) == 1.5);
  const auto j = to_json(make_check("gamma", "ks", {{"alpha", 1.0}}, 0.004, 0.01, Compare::below));
  CHECK(j["pass"] == true);
  CHECK(j["params"]["alpha"] == 1.0);
  CHECK(j["compare"] == "<");
  MomentReport m;
  m.p = 2.0;
  m.m_pow = kInf;
  CHECK(to_json(m)["zstar_bound"] == "inf");
}
