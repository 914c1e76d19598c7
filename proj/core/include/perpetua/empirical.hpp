#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace perpetua {

// Where a sample came from. Filled by the batch sampler; default-constructed
// for hand-built distributions.
struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t first_stream_id = 0;
  std::uint64_t stream_count = 0;
  double epsilon = 0.0;
  std::uint64_t max_terms = 0;
  std::uint64_t exact_count = 0;      // stopped on Pi_k = 0
  std::uint64_t truncated_count = 0;  // stopped on |Pi_k| <= epsilon
  std::uint64_t exhausted_count = 0;  // hit max_terms
  double mean_terms = 0.0;
};

// Sorted sample with read-only statistics.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples, Provenance provenance = {});

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const Provenance& provenance() const noexcept { return provenance_; }

  // Fraction of samples <= x.
  double cdf(double x) const noexcept;
  // Smallest sample x with cdf(x) >= q. Rejects empty samples and q outside [0, 1].
  double quantile(double q) const;
  double mean() const;
  // Unbiased sample variance; 0 for a single sample.
  double variance() const;

 private:
  std::vector<double> samples_;
  Provenance provenance_;
};

using Cdf = std::function<double(double)>;

// sup_x |F_n(x) - F(x)| evaluated at the sample points. Tied samples are
// grouped, and F is evaluated right-continuously on both sides of each
// group; against a discontinuous F this reads the jump itself (a point mass
// compared with its own step cdf gives 1).
double ks_distance(const EmpiricalDistribution& emp, const Cdf& cdf);

// Two-sample Kolmogorov-Smirnov statistic. With slack h > 0 the comparison is
// max(sup_x F_a(x - h) - F_b(x), sup_x F_b(x - h) - F_a(x)), clipped at 0,
// so values closer than h count as ties.
double two_sample_ks(std::span<const double> a_sorted, std::span<const double> b_sorted,
                     double slack = 0.0);

// (1/n) sum exp(i t x_j).
std::complex<double> empirical_cf(const EmpiricalDistribution& emp, double t);

// Sample mean of |x|^p (absolute) or x^p. p = 0 gives 1.
double empirical_moment(const EmpiricalDistribution& emp, double p, bool absolute);

struct Atom {
  double value;
  double prob;
};

// Exactly repeated values whose frequency is at least min_prob, most
// frequent first.
std::vector<Atom> atom_scan(const EmpiricalDistribution& emp, double min_prob);

}  // namespace perpetua
