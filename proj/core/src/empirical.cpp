#include "perpetua/empirical.hpp"

#include "perpetua/errors.hpp"

#include <algorithm>
#include <cmath>

namespace perpetua {

namespace {

void require_nonempty(const EmpiricalDistribution& emp, const char* op) {
  if (emp.empty()) throw PreconditionError(std::string(op) + ": empty sample");
}

// Fraction of sorted values <= x.
double ecdf(std::span<const double> sorted, double x) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

// max_i [F_a(a_i) - F_b(a_i + h)]
double one_sided(std::span<const double> a, std::span<const double> b, double h) {
  double best = 0.0;
  const double na = static_cast<double>(a.size());
  std::size_t i = 0;
  while (i < a.size()) {
    std::size_t j = i;
    while (j + 1 < a.size() && a[j + 1] == a[i]) ++j;
    const double fa = static_cast<double>(j + 1) / na;
    best = std::max(best, fa - ecdf(b, a[i] + h));
    i = j + 1;
  }
  return best;
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples, Provenance provenance)
    : samples_(std::move(samples)), provenance_(provenance) {
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double x) const noexcept {
  if (samples_.empty()) return 0.0;
  return ecdf(samples_, x);
}

double EmpiricalDistribution::quantile(double q) const {
  require_nonempty(*this, "quantile");
  if (!(q >= 0.0 && q <= 1.0)) throw PreconditionError("quantile: q outside [0, 1]");
  const double n = static_cast<double>(samples_.size());
  const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(q * n)));
  return samples_[std::min(rank, samples_.size()) - 1];
}

double EmpiricalDistribution::mean() const {
  require_nonempty(*this, "mean");
  double acc = 0.0;
  for (double x : samples_) acc += x;
  return acc / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::variance() const {
  require_nonempty(*this, "variance");
  if (samples_.size() < 2) return 0.0;
  const double mu = mean();
  double acc = 0.0;
  for (double x : samples_) acc += (x - mu) * (x - mu);
  return acc / static_cast<double>(samples_.size() - 1);
}

double ks_distance(const EmpiricalDistribution& emp, const Cdf& cdf) {
  require_nonempty(emp, "ks_distance");
  const auto xs = emp.samples();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j + 1 < xs.size() && xs[j + 1] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    const double below = static_cast<double>(i) / n;
    const double through = static_cast<double>(j + 1) / n;
    d = std::max({d, through - f, f - below});
    i = j + 1;
  }
  return d;
}

double two_sample_ks(std::span<const double> a, std::span<const double> b, double slack) {
  if (a.empty() || b.empty()) throw PreconditionError("two_sample_ks: empty sample");
  const double h = std::max(0.0, slack);
  return std::max(one_sided(a, b, h), one_sided(b, a, h));
}

std::complex<double> empirical_cf(const EmpiricalDistribution& emp, double t) {
  require_nonempty(emp, "empirical_cf");
  double re = 0.0;
  double im = 0.0;
  for (double x : emp.samples()) {
    re += std::cos(t * x);
    im += std::sin(t * x);
  }
  const double n = static_cast<double>(emp.size());
  return {re / n, im / n};
}

double empirical_moment(const EmpiricalDistribution& emp, double p, bool absolute) {
  require_nonempty(emp, "empirical_moment");
  if (p == 0.0) return 1.0;
  double acc = 0.0;
  for (double x : emp.samples()) acc += std::pow(absolute ? std::fabs(x) : x, p);
  return acc / static_cast<double>(emp.size());
}

std::vector<Atom> atom_scan(const EmpiricalDistribution& emp, double min_prob) {
  if (!(min_prob > 0.0 && min_prob <= 1.0))
    throw PreconditionError("atom_scan: min_prob must lie in (0, 1]");
  std::vector<Atom> atoms;
  const auto xs = emp.samples();
  const double n = static_cast<double>(xs.size());
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j + 1 < xs.size() && xs[j + 1] == xs[i]) ++j;
    const double freq = static_cast<double>(j - i + 1) / n;
    if (freq >= min_prob) atoms.push_back({xs[i], freq});
    i = j + 1;
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& l, const Atom& r) { return l.prob > r.prob; });
  return atoms;
}

}  // namespace perpetua
