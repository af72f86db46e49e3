#pragma once

#include "qpf/period_prob.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qpf::sampler {

inline constexpr const char* kRngId = "splitmix64-counter-v1";
inline constexpr int kSamplerMaxM = 24;

/// Seedable counter-based stream: every (seed, counter) pair opens an
/// independent substream, so trials can be drawn in any order.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t counter);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double next_double();

  private:
    std::uint64_t state_;
};

struct TrialRecord {
    std::int64_t k = 0;
    std::int64_t x = 0;
    bool in_window = false;
    std::optional<std::int64_t> cf_denominator;
    bool recovered_divisor = false;
};

struct TrialSummary {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double empirical_rate = 0.0;
    double predicted = 0.0;
    double z_score = 0.0;
    std::uint64_t seed = 0;
    std::string rng_id = kRngId;
};

/// Hidden offset k drawn with the preparation weights m_k / 2^m.
std::int64_t sample_k(const period::RegisterSpec& reg, RandomStream& rng);

/// Inverse-CDF table over P(x|k) = S_k(x)/2^m; the table sum is checked
/// against 1 to 1e-9 before use.
class XDistribution {
  public:
    XDistribution(std::int64_t k, const period::RegisterSpec& reg);

    std::int64_t sample(RandomStream& rng) const;
    const std::vector<double>& cdf() const { return cdf_; }

  private:
    std::vector<double> cdf_;
};

/// One draw of the observed frequency (builds a throwaway table; use
/// XDistribution directly for repeated sampling).
std::int64_t sample_x(std::int64_t k, const period::RegisterSpec& reg, RandomStream& rng);

/// Window membership among the useful frequencies, exact integer test.
bool classify(std::int64_t x, const period::RegisterSpec& reg);

/// Largest continued-fraction convergent denominator d of x/2^m with
/// 2 <= d <= r_max_hint; empty when none exists (e.g. x = 0).
std::optional<std::int64_t> cf_recover(std::int64_t x, const period::RegisterSpec& reg,
                                       std::optional<std::int64_t> r_max_hint = std::nullopt);

/// Holds the per-k frequency tables for repeated trials; immutable after
/// construction, so trials may run concurrently.
class TrialSampler {
  public:
    explicit TrialSampler(const period::RegisterSpec& reg);

    TrialRecord trial(std::uint64_t seed, std::uint64_t trial_index) const;
    const period::RegisterSpec& reg() const { return reg_; }

  private:
    period::RegisterSpec reg_;
    std::vector<XDistribution> per_k_;
};

/// Seeded Monte-Carlo run; success is window membership, the continued
/// fraction result is a diagnostic only.
TrialSummary run_trials(const period::PeriodSpec& spec, int q, std::uint64_t trials,
                        std::uint64_t seed);

}  // namespace qpf::sampler
