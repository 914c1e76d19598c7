#pragma once

#include "perpetua/empirical.hpp"
#include "perpetua/existence.hpp"
#include "perpetua/law.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace perpetua {

struct PerpetuityConfig {
  JointLaw joint;
  double epsilon = 1e-15;            // stop once |Pi_k| <= epsilon
  std::uint64_t max_terms = 1'000'000;
  std::uint64_t seed = 0;
};

// Throws PreconditionError unless 0 < epsilon < 1 and max_terms >= 1.
void validate(const PerpetuityConfig& config);

struct SampleOutcome {
  double value = 0.0;
  std::uint64_t terms = 0;
  bool truncated = false;  // stopped on |Pi_k| <= epsilon or on max_terms
  bool exhausted = false;  // stopped on max_terms (slow contraction)
};

// Backward iteration Z = sum_k Pi_{k-1} Q_k for one configuration. The
// existence check runs once at construction and throws NonConvergentError for
// laws whose series does not converge a.s.
class PerpetuitySampler {
 public:
  explicit PerpetuitySampler(PerpetuityConfig config);

  SampleOutcome sample(const RandomStream& stream) const;
  SampleOutcome sample(std::uint64_t stream_id) const {
    return sample(RandomStream(config_.seed, stream_id));
  }

  const PerpetuityConfig& config() const noexcept { return config_; }
  const ExistenceReport& existence() const noexcept { return existence_; }

 private:
  PerpetuityConfig config_;
  ExistenceReport existence_;
  bool zero_series_ = false;  // P{Q = 0} = 1
};

// One draw of Z from (seed, stream id) of `stream`.
SampleOutcome sample_perpetuity(const PerpetuityConfig& config, const RandomStream& stream);

struct BatchOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  std::uint64_t first_stream_id = 0;
};

// Outcomes for stream ids first..first+n-1, in stream-id order. The result
// does not depend on the number of workers.
std::vector<SampleOutcome> draw_batch(const PerpetuitySampler& sampler, std::uint64_t n,
                                      const BatchOptions& options = {});

// Sorted values with provenance counts for outcomes drawn under `config`.
EmpiricalDistribution to_empirical(std::span<const SampleOutcome> outcomes,
                                   const PerpetuityConfig& config, const BatchOptions& options = {});

EmpiricalDistribution sample_batch(const PerpetuityConfig& config, std::uint64_t n,
                                   const BatchOptions& options = {});
EmpiricalDistribution sample_batch(const PerpetuitySampler& sampler, std::uint64_t n,
                                   const BatchOptions& options = {});

enum class TrajectoryKind { backward_partial_sums, forward_ifs };

struct Trajectory {
  TrajectoryKind kind;
  std::vector<double> values;      // Z_1..Z_n, or Phi_0..Phi_n
  std::vector<double> increments;  // Pi_{k-1} Q_k (backward only)
};

// Phi_k = Q_k + M_k Phi_{k-1}, k = 1..n; values holds Phi_0..Phi_n.
Trajectory forward_iterate(const JointLaw& joint, double phi0, std::uint64_t n,
                           const RandomStream& stream);
// Z_k = sum_{j <= k} Pi_{j-1} Q_j along one realization, k = 1..n.
Trajectory partial_sum_trajectory(const JointLaw& joint, std::uint64_t n,
                                  const RandomStream& stream);

// Two-sample KS statistic between {Z_i} and {Q_i + M_i Z'_i}, where Z and Z'
// are independent batches of size n and (M_i, Q_i) fresh draws.
double fixed_point_residual(const PerpetuityConfig& config, std::uint64_t n,
                            const BatchOptions& options = {});

}  // namespace perpetua
