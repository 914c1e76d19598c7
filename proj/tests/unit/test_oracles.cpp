#include "perpetua/errors.hpp"
#include "perpetua/oracles.hpp"
#include "perpetua/sampler.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace perpetua;
using doctest::Approx;

namespace {

EmpiricalDistribution draw(const JointLaw& joint, std::uint64_t n, std::uint64_t seed) {
  PerpetuityConfig c{joint};
  c.seed = seed;
  return sample_batch(c, n);
}

}  // namespace

TEST_CASE("geometric pmf") {
  const OracleSpec o = oracle_geometric(0.3);
  CHECK(o.pmf(1.0) == Approx(0.3));
  CHECK(o.pmf(2.0) == Approx(0.21));
  CHECK(o.pmf(0.0) == 0.0);
  CHECK(o.pmf(1.5) == 0.0);
  CHECK_FALSE(o.cdf);
  double mean = 0.0;
  for (int k = 1; k < 400; ++k) mean += k * o.pmf(k);
  CHECK(mean == Approx(10.0 / 3.0));
  CHECK_THROWS_AS(oracle_geometric(1.0), PreconditionError);
}

TEST_CASE("oracle cdfs are distribution functions") {
  const OracleSpec specs[] = {oracle_uniform_digits(10), oracle_uniform_symmetric(),
                              oracle_gamma_sizebias(1.0), oracle_gamma_sizebias(3.5),
                              oracle_levy_half(1.0), oracle_levy_half(2.5)};
  for (const auto& o : specs) {
    INFO(o.name);
    REQUIRE(o.cdf);
    CHECK_FALSE(o.pmf);
    CHECK(o.cdf(-1e6) == Approx(0.0));
    double prev = 0.0;
    for (double x = -5.0; x <= 50.0; x += 0.01) {
      const double f = o.cdf(x);
      REQUIRE(f >= prev);
      prev = f;
    }
    CHECK(o.cdf(1e12) == Approx(1.0).epsilon(1e-5));
  }
  CHECK(oracle_uniform_digits(10).cdf(5.0) == Approx(0.5));
}

TEST_CASE("levy-half median and Q check") {
  const OracleSpec o = oracle_levy_half(2.0);
  const double x = 4.0 / std::pow(2.0 * boost::math::erfc_inv(0.5), 2);
  CHECK(x == Approx(4.0 * 1.0990).epsilon(1e-4));
  CHECK(o.cdf(x) == Approx(0.5));
  const double grid[] = {0.5, 1.0, 2.0};
  CHECK(levy_half_q_check(1.0, grid) < 1e-8);
  CHECK(levy_half_q_check(3.0, grid) < 1e-8);
}

TEST_CASE("size-biased Laplace transforms") {
  const double grid[] = {0.5, 1.0, 2.0};
  CHECK(size_bias_lt_deviation(oracle_gamma_sizebias(1.0), grid) < 1e-6);
  CHECK(size_bias_lt_deviation(oracle_gamma_sizebias(2.5), grid) < 1e-6);
  CHECK(size_bias_lt_deviation(oracle_levy_half(1.0), grid) < 1e-6);
}

TEST_CASE("pitman-yor transform") {
  const double grid[] = {0.5, 1.0, 2.0};
  CHECK(oracle_pitman_yor_identity(grid) < 1e-6);
  const OracleSpec o = oracle_pitman_yor();
  CHECK(o.lt(1e-4) == Approx(1.0).epsilon(1e-3));
  CHECK(o.lt(0.5) > o.lt(1.0));
  CHECK(o.lt(1.0) > o.lt(2.0));
  CHECK_FALSE(o.config);
}

TEST_CASE("bernoulli cf") {
  for (double t : {0.3, 1.0, 7.5, 40.0})
    CHECK(bernoulli_cf(0.5, t) == Approx(std::sin(2.0 * t) / (2.0 * t)).epsilon(1e-10));
  CHECK(std::fabs(bernoulli_cf(1.0 / 3.0, std::numbers::pi * 729.0)) > 0.2);
}

TEST_CASE("purity probe classifications") {
  SUBCASE("c = 1/2 decays") {
    const auto emp = draw(oracle_uniform_symmetric().config.value(), 100'000, 1);
    const PurityReport r = purity_probe(emp, 0.5, 1000.0);
    CHECK(r.atoms.empty());
    CHECK(r.cf_decay == CfDecay::decaying);
    REQUIRE(r.analytic_cf_deviation);
    CHECK(*r.analytic_cf_deviation < 0.02);
  }
  SUBCASE("c = 1/3 persists") {
    const JointLaw j = JointLaw::independent(ScalarLaw::point_mass(1.0 / 3.0), ScalarLaw::rademacher(1.0));
    const auto emp = draw(j, 100'000, 2);
    const PurityReport r = purity_probe(emp, 1.0 / 3.0, 1000.0);
    CHECK(r.atoms.empty());
    CHECK(r.cf_decay == CfDecay::persistent);
    CHECK(*r.analytic_cf_deviation < 0.02);
  }
  SUBCASE("continuous law without a lattice") {
    const auto emp = draw(oracle_gamma_sizebias(1.0).config.value(), 50'000, 3);
    CHECK(purity_probe(emp, std::nullopt, 1000.0).cf_decay == CfDecay::decaying);
  }
  SUBCASE("degenerate law is a single atom") {
    const JointLaw j = JointLaw::independent(ScalarLaw::point_mass(0.5), ScalarLaw::point_mass(1.0));
    const auto emp = draw(j, 1000, 4);
    const PurityReport r = purity_probe(emp, std::nullopt, 100.0);
    REQUIRE(r.atoms.size() == 1);
    CHECK(r.atoms[0].prob == 1.0);
    CHECK(r.cf_decay == CfDecay::persistent);
  }
  SUBCASE("geometric atoms match the pmf") {
    const OracleSpec o = oracle_geometric(0.3);
    const std::uint64_t n = 100'000;
    const auto emp = draw(o.config.value(), n, 5);
    const PurityReport r = purity_probe(emp, std::nullopt, 100.0);
    REQUIRE(r.atoms.size() >= 10);
    for (const auto& a : r.atoms) {
      const double p = o.pmf(a.value);
      const double sigma = std::sqrt(p * (1.0 - p) / n);
      INFO("k=" << a.value);
      CHECK(std::fabs(a.prob - p) < 3.0 * sigma + 1e-12);
    }
  }
  CHECK_THROWS_AS(purity_probe(EmpiricalDistribution(), std::nullopt, 10.0), PreconditionError);
}
