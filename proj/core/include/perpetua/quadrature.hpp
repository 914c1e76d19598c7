#pragma once

#include <functional>
#include <span>

namespace perpetua::quad {

inline constexpr double kDefaultRelTol = 1e-10;

using Integrand = std::function<double(double)>;

// Integral of f over [a, b]. Either bound may be infinite. Finite pieces use
// tanh-sinh (tolerates integrable endpoint singularities), half-lines use
// exp-sinh, the whole line sinh-sinh.
double integrate(const Integrand& f, double a, double b, double rel_tol = kDefaultRelTol);

// Sum of integrals over consecutive pieces [breaks[i], breaks[i+1]].
// `breaks` must be nondecreasing; duplicate points are skipped.
double integrate_pieces(const Integrand& f, std::span<const double> breaks,
                        double rel_tol = kDefaultRelTol);

}  // namespace perpetua::quad
