#include "perpetua/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace perpetua::quad {

namespace {

// A density that vanishes where the moment factor overflows evaluates to
// 0 * inf = NaN at extreme abscissae; such points contribute nothing.
double guarded(const Integrand& f, double x) {
  const double v = f(x);
  return std::isnan(v) ? 0.0 : v;
}

}  // namespace

double integrate(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, rel_tol);
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);

  if (lo_inf && hi_inf) {
    boost::math::quadrature::sinh_sinh<double> integrator;
    return integrator.integrate([&](double x) { return guarded(f, x); }, rel_tol);
  }
  if (hi_inf) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double x) { return guarded(f, x); }, a, b, rel_tol);
  }
  if (lo_inf) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double x) { return guarded(f, -x); }, -b,
                                std::numeric_limits<double>::infinity(), rel_tol);
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([&](double x) { return guarded(f, x); }, a, b, rel_tol);
}

double integrate_pieces(const Integrand& f, std::span<const double> breaks, double rel_tol) {
  double total = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (breaks[i] > breaks[i - 1]) total += integrate(f, breaks[i - 1], breaks[i], rel_tol);
  }
  return total;
}

}  // namespace perpetua::quad
