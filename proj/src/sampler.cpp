#include "qpf/sampler.hpp"

#include "qpf/asymptotics.hpp"
#include "qpf/detail/compensated.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace qpf::sampler {

namespace {

std::uint64_t splitmix_step(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Closed-form S_k at an integer frequency, with the integrality cases
// decided in integer arithmetic.
double s_closed(std::int64_t x, std::int64_t mk, const period::RegisterSpec& reg) {
    const std::uint64_t mask = (std::uint64_t{1} << reg.m) - 1;
    const std::uint64_t num = static_cast<std::uint64_t>(reg.spec.r * x);
    if ((num & mask) == 0) {
        return static_cast<double>(mk);
    }
    if (((static_cast<std::uint64_t>(mk) * num) & mask) == 0) {
        return 0.0;
    }
    const double a1 = std::ldexp(static_cast<double>(num), -reg.m);
    const double a2 = std::ldexp(static_cast<double>(mk) * static_cast<double>(num), -reg.m);
    const double ratio = asymptotics::sinc(a2) / asymptotics::sinc(a1);
    return static_cast<double>(mk) * ratio * ratio;
}

void check_sampler_m(const period::RegisterSpec& reg) {
    if (reg.m > kSamplerMaxM) {
        throw std::invalid_argument("sampler register cap exceeded (m > 24)");
    }
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t counter) {
    // two mixing rounds decorrelate (seed, counter) pairs
    std::uint64_t s = seed ^ (counter * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull);
    splitmix_step(s);
    splitmix_step(s);
    state_ = s;
}

std::uint64_t RandomStream::next_u64() { return splitmix_step(state_); }

double RandomStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t sample_k(const period::RegisterSpec& reg, RandomStream& rng) {
    const double two_m = std::ldexp(1.0, reg.m);
    const double u = rng.next_double();
    double acc = 0.0;
    for (std::int64_t k = 0; k < reg.spec.r; ++k) {
        acc += static_cast<double>(period::m_k(k, reg)) / two_m;
        if (u < acc) {
            return k;
        }
    }
    return reg.spec.r - 1;
}

XDistribution::XDistribution(std::int64_t k, const period::RegisterSpec& reg) {
    check_sampler_m(reg);
    const std::int64_t size = std::int64_t{1} << reg.m;
    const std::int64_t mk = period::m_k(k, reg);
    std::vector<double> probs(static_cast<std::size_t>(size));
    detail::CompensatedSum total;
    for (std::int64_t x = 0; x < size; ++x) {
        const double p = s_closed(x, mk, reg) / std::ldexp(1.0, reg.m);
        probs[static_cast<std::size_t>(x)] = p;
        total.add(p);
    }
    const double sum = total.result();
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::runtime_error("frequency distribution failed normalization check");
    }
    cdf_.resize(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i] / sum;
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

std::int64_t XDistribution::sample(RandomStream& rng) const {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::int64_t>(std::distance(cdf_.begin(), it));
}

std::int64_t sample_x(std::int64_t k, const period::RegisterSpec& reg, RandomStream& rng) {
    return XDistribution(k, reg).sample(rng);
}

bool classify(std::int64_t x, const period::RegisterSpec& reg) {
    const std::int64_t r = reg.spec.r;
    const std::int64_t two_m = std::int64_t{1} << reg.m;
    if (x < 0 || x >= two_m) {
        throw std::invalid_argument("x out of [0, 2^m)");
    }
    // the windows are narrower than the harmonic spacing, so only the
    // nearest j can match
    const std::int64_t j = (2 * x * r + two_m) / (2 * two_m);
    if (j < 1 || j >= r) {
        return false;
    }
    const std::int64_t diff = std::abs(x * r - (j << reg.m));
    return reg.q >= 1 ? 2 * diff < (r << reg.q) : (diff << (1 - reg.q)) < r;
}

std::optional<std::int64_t> cf_recover(std::int64_t x, const period::RegisterSpec& reg,
                                       std::optional<std::int64_t> r_max_hint) {
    const std::int64_t hint = r_max_hint.value_or(std::int64_t{1} << (reg.m / 2));
    std::int64_t a = x;
    std::int64_t b = std::int64_t{1} << reg.m;
    // recurrence seeds: k_{-2} = 1, k_{-1} = 0
    std::int64_t den_prev = 1;
    std::int64_t den = 0;
    std::optional<std::int64_t> best;
    while (b != 0) {
        const std::int64_t digit = a / b;
        const std::int64_t next_den = digit * den + den_prev;
        den_prev = std::exchange(den, next_den);
        if (den >= 2 && den <= hint) {
            best = den;
        }
        a = std::exchange(b, a % b);
    }
    return best;
}

TrialSampler::TrialSampler(const period::RegisterSpec& reg) : reg_(reg) {
    check_sampler_m(reg);
    per_k_.reserve(static_cast<std::size_t>(reg.spec.r));
    for (std::int64_t k = 0; k < reg.spec.r; ++k) {
        per_k_.emplace_back(k, reg);
    }
}

TrialRecord TrialSampler::trial(std::uint64_t seed, std::uint64_t trial_index) const {
    RandomStream rng(seed, trial_index);
    TrialRecord rec;
    rec.k = sample_k(reg_, rng);
    rec.x = per_k_[static_cast<std::size_t>(rec.k)].sample(rng);
    rec.in_window = classify(rec.x, reg_);
    rec.cf_denominator = cf_recover(rec.x, reg_, reg_.spec.r);
    rec.recovered_divisor =
        rec.cf_denominator.has_value() && reg_.spec.r % *rec.cf_denominator == 0;
    return rec;
}

TrialSummary run_trials(const period::PeriodSpec& spec, int q, std::uint64_t trials,
                        std::uint64_t seed) {
    if (trials == 0) {
        throw std::invalid_argument("run_trials requires trials >= 1");
    }
    const period::RegisterSpec reg = period::register_for(spec, q);
    const TrialSampler sampler(reg);

    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (sampler.trial(seed, t).in_window) {
            ++successes;
        }
    }

    TrialSummary summary;
    summary.trials = trials;
    summary.successes = successes;
    summary.empirical_rate = static_cast<double>(successes) / static_cast<double>(trials);
    summary.predicted = period::p_tot_averaged(reg);
    const double n = static_cast<double>(trials);
    const double p = summary.predicted;
    summary.z_score = (static_cast<double>(successes) - n * p) / std::sqrt(n * p * (1.0 - p));
    summary.seed = seed;
    return summary;
}

}  // namespace qpf::sampler
