#include "perpetua/sampler.hpp"

#include "perpetua/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>

namespace perpetua {

namespace {

// Seeds for the independent batches inside fixed_point_residual.
constexpr std::uint64_t kPrimeBatchTag = 0x7A11'5EED'0000'0001ull;
constexpr std::uint64_t kFreshPairTag = 0x7A11'5EED'0000'0002ull;

unsigned resolve_workers(unsigned requested, std::uint64_t n) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (n < w) w = static_cast<unsigned>(std::max<std::uint64_t>(n, 1));
  return w;
}

}  // namespace

void validate(const PerpetuityConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw PreconditionError("epsilon must lie in (0, 1)");
  if (config.max_terms < 1) throw PreconditionError("max_terms must be >= 1");
}

PerpetuitySampler::PerpetuitySampler(PerpetuityConfig config)
    : config_(std::move(config)), existence_(existence_report(config_.joint)) {
  validate(config_);
  zero_series_ = existence_.p_q_zero >= 1.0;
  const bool ok = existence_.verdict == Verdict::converges_as ||
                  existence_.verdict == Verdict::exact_stop ||
                  (existence_.verdict == Verdict::trivial_degenerate &&
                   (zero_series_ || existence_.pi_to_zero == Tri::yes));
  if (!ok) {
    throw NonConvergentError("perpetuity does not converge a.s. (verdict: " +
                             std::string(to_string(existence_.verdict)) + ")");
  }
}

SampleOutcome PerpetuitySampler::sample(const RandomStream& stream) const {
  if (zero_series_) return {0.0, 0, false, false};
  PairStream streams(stream);
  double product = 1.0;
  double sum = 0.0;
  for (std::uint64_t k = 1; k <= config_.max_terms; ++k) {
    const PairDraw d = sample_joint(config_.joint, streams);
    sum += product * d.q;
    if (d.m == 0.0) return {sum, k, false, false};
    product *= d.m;
    if (std::fabs(product) <= config_.epsilon) return {sum, k, true, false};
  }
  return {sum, config_.max_terms, true, true};
}

SampleOutcome sample_perpetuity(const PerpetuityConfig& config, const RandomStream& stream) {
  return PerpetuitySampler(config).sample(stream);
}

std::vector<SampleOutcome> draw_batch(const PerpetuitySampler& sampler, std::uint64_t n,
                                      const BatchOptions& options) {
  std::vector<SampleOutcome> out(n);
  if (n == 0) return out;
  const unsigned workers = resolve_workers(options.workers, n);
  const std::uint64_t seed = sampler.config().seed;

  struct Failure {
    std::uint64_t stream_id;
    std::string message;
  };
  std::vector<std::optional<Failure>> failures(workers);

  auto run_chunk = [&](unsigned w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) {
      const std::uint64_t id = options.first_stream_id + i;
      try {
        out[i] = sampler.sample(RandomStream(seed, id));
      } catch (const std::exception& e) {
        failures[w] = Failure{id, e.what()};
        return;
      }
    }
  };

  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run_chunk, w);
  }
  for (const auto& f : failures) {
    if (f) throw SampleError(f->stream_id, f->message);
  }
  return out;
}

EmpiricalDistribution to_empirical(std::span<const SampleOutcome> outcomes,
                                   const PerpetuityConfig& config, const BatchOptions& options) {
  Provenance prov;
  prov.seed = config.seed;
  prov.first_stream_id = options.first_stream_id;
  prov.stream_count = outcomes.size();
  prov.epsilon = config.epsilon;
  prov.max_terms = config.max_terms;
  std::vector<double> values;
  values.reserve(outcomes.size());
  double terms = 0.0;
  for (const auto& o : outcomes) {
    values.push_back(o.value);
    terms += static_cast<double>(o.terms);
    if (o.exhausted)
      ++prov.exhausted_count;
    else if (o.truncated)
      ++prov.truncated_count;
    else
      ++prov.exact_count;
  }
  prov.mean_terms = outcomes.empty() ? 0.0 : terms / static_cast<double>(outcomes.size());
  return EmpiricalDistribution(std::move(values), prov);
}

EmpiricalDistribution sample_batch(const PerpetuitySampler& sampler, std::uint64_t n,
                                   const BatchOptions& options) {
  return to_empirical(draw_batch(sampler, n, options), sampler.config(), options);
}

EmpiricalDistribution sample_batch(const PerpetuityConfig& config, std::uint64_t n,
                                   const BatchOptions& options) {
  return sample_batch(PerpetuitySampler(config), n, options);
}

Trajectory forward_iterate(const JointLaw& joint, double phi0, std::uint64_t n,
                           const RandomStream& stream) {
  if (n < 1) throw PreconditionError("forward_iterate: n must be >= 1");
  PairStream streams(stream);
  Trajectory t{TrajectoryKind::forward_ifs, {}, {}};
  t.values.reserve(n + 1);
  t.values.push_back(phi0);
  double phi = phi0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const PairDraw d = sample_joint(joint, streams);
    phi = d.q + d.m * phi;
    t.values.push_back(phi);
  }
  return t;
}

Trajectory partial_sum_trajectory(const JointLaw& joint, std::uint64_t n,
                                  const RandomStream& stream) {
  if (n < 1) throw PreconditionError("partial_sum_trajectory: n must be >= 1");
  PairStream streams(stream);
  Trajectory t{TrajectoryKind::backward_partial_sums, {}, {}};
  t.values.reserve(n);
  t.increments.reserve(n);
  double product = 1.0;
  double sum = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const PairDraw d = sample_joint(joint, streams);
    const double increment = product * d.q;
    sum += increment;
    t.values.push_back(sum);
    t.increments.push_back(increment);
    product *= d.m;
  }
  return t;
}

double fixed_point_residual(const PerpetuityConfig& config, std::uint64_t n,
                            const BatchOptions& options) {
  if (n == 0) throw PreconditionError("fixed_point_residual: n must be positive");
  const PerpetuitySampler sampler(config);
  const EmpiricalDistribution z = sample_batch(sampler, n, options);

  PerpetuityConfig prime_config = config;
  prime_config.seed = mix64(config.seed ^ kPrimeBatchTag);
  const PerpetuitySampler prime_sampler(prime_config);
  const auto z_prime = draw_batch(prime_sampler, n, options);

  const std::uint64_t pair_seed = mix64(config.seed ^ kFreshPairTag);
  std::vector<double> image(n);
  double scale = 1.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    PairStream streams(RandomStream(pair_seed, i));
    const PairDraw d = sample_joint(config.joint, streams);
    image[i] = d.q + d.m * z_prime[i].value;
    if (std::isfinite(image[i])) scale = std::max(scale, std::fabs(image[i]));
  }
  std::sort(image.begin(), image.end());
  for (double x : z.samples())
    if (std::isfinite(x)) scale = std::max(scale, std::fabs(x));

  const double slack = 64.0 * config.epsilon * scale;
  return two_sample_ks(z.samples(), image, slack);
}

}  // namespace perpetua
