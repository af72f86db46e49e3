#include "qpf/factor_bench.hpp"

#include <stdexcept>

namespace qpf::bench {

namespace {

// uniform odd integer in [1, d_max]
Int random_odd(const Int& d_max, sampler::RandomStream& rng) {
    const Int half = (d_max + 1) / 2;  // number of odd candidates
    const Int pick(static_cast<unsigned long>(
        rng.next_u64() % half.get_ui()));
    return 2 * pick + 1;
}

Int random_base(const Int& n, sampler::RandomStream& rng) {
    // uniform in [2, n-2]
    const unsigned long span = static_cast<unsigned long>(Int(n - 3).get_ui()) + 1;
    return Int(static_cast<unsigned long>(rng.next_u64() % span)) + 2;
}

}  // namespace

SemiprimeSpec gen_semiprime(unsigned c_p, unsigned c_q, const Int& d_max,
                            sampler::RandomStream& rng) {
    if (c_p < c_q || c_q < 1) {
        throw std::invalid_argument("gen_semiprime requires c_p >= c_q >= 1");
    }
    if (d_max < 1) {
        throw std::invalid_argument("gen_semiprime requires d_max >= 1");
    }
    constexpr int kAttemptCap = 20000;
    for (int attempt = 0; attempt < kAttemptCap; ++attempt) {
        const Int p = (Int(1) << c_p) * random_odd(d_max, rng) + 1;
        const Int q = (Int(1) << c_q) * random_odd(d_max, rng) + 1;
        if (p == q || !numthy::is_prime(p) || !numthy::is_prime(q)) {
            continue;
        }
        return SemiprimeSpec::make(p, q);
    }
    throw std::runtime_error("gen_semiprime attempt cap exhausted");
}

BaseChoice choose_L(const SemiprimeSpec& spec, sampler::RandomStream& rng) {
    constexpr int kRejectionCap = 1000000;
    for (int i = 0; i < kRejectionCap; ++i) {
        const Int b = random_base(spec.N, rng);
        if (numthy::gcd(b, spec.N) != 1) {
            continue;
        }
        if (numthy::jacobi(b, spec.N) == -1) {
            return BaseChoice{b, -1, true, Tag::L};
        }
    }
    throw std::runtime_error("choose_L rejection cap exhausted");
}

BaseChoice choose_Lbar(const SemiprimeSpec& spec, sampler::RandomStream& rng) {
    constexpr int kRejectionCap = 1000000;
    for (int i = 0; i < kRejectionCap; ++i) {
        const Int b = random_base(spec.N, rng);
        if (numthy::gcd(b, spec.N) != 1) {
            continue;
        }
        if (numthy::jacobi(b, spec.N) == 1 && numthy::is_qnr(b, spec)) {
            return BaseChoice{b, 1, true, Tag::Lbar};
        }
    }
    throw std::runtime_error("choose_Lbar rejection cap exhausted");
}

FactorAttempt factor_attempt(const BaseChoice& choice, const SemiprimeSpec& spec) {
    FactorAttempt attempt;
    attempt.choice = choice;
    attempt.r = numthy::order(choice.b, spec.N);
    attempt.r_even = mpz_even_p(attempt.r.get_mpz_t()) != 0;
    if (!attempt.r_even) {
        attempt.f_b = 1;
        attempt.success = false;
        return attempt;
    }
    const Int half_power = numthy::mod_pow(choice.b, attempt.r / 2, spec.N);
    attempt.f_b = numthy::gcd(half_power - 1, spec.N);
    attempt.success = attempt.f_b != 1 && attempt.f_b != spec.N;
    if (attempt.success && attempt.f_b != spec.p && attempt.f_b != spec.q_) {
        throw std::logic_error("non-trivial factor is not a prime factor");
    }
    return attempt;
}

mpq_class leander_prob(unsigned c_p, unsigned c_q) {
    if (c_p < c_q || c_q < 1) {
        throw std::invalid_argument("leander_prob requires c_p >= c_q >= 1");
    }
    if (c_p == c_q) {
        return {1};
    }
    mpq_class failure(1, 1);
    failure /= mpq_class(Int(1) << (1 + c_p - c_q));
    return 1 - failure;
}

SchemeDecision detect_scheme(const SemiprimeSpec& spec) {
    SchemeDecision decision;
    const int j_minus1 = numthy::jacobi(-1, spec.N);
    decision.evidence.emplace_back("(-1/N)", j_minus1);
    if (j_minus1 == -1) {
        decision.scheme = Scheme::A;
        decision.inferred = "c_p>c_q=1";
        return decision;
    }
    const bool minus1_qnr = numthy::is_qnr(spec.N - 1, spec);
    decision.evidence.emplace_back("-1 is QNR", minus1_qnr ? 1 : 0);
    if (minus1_qnr) {
        decision.scheme = Scheme::B;
        decision.inferred = "c_p=1=c_q";
        return decision;
    }
    const int j_two = numthy::jacobi(2, spec.N);
    decision.evidence.emplace_back("(2/N)", j_two);
    if (j_two == -1) {
        decision.scheme = Scheme::A;
        decision.inferred = "c_p>c_q=2";
        return decision;
    }
    const bool two_qnr = numthy::is_qnr(2, spec);
    decision.evidence.emplace_back("2 is QNR", two_qnr ? 1 : 0);
    if (two_qnr) {
        decision.scheme = Scheme::B;
        decision.inferred = "c_p=2=c_q";
        return decision;
    }
    decision.scheme = Scheme::Undetermined;
    decision.inferred = "c_q>=3";
    return decision;
}

unsigned find_cq_by_sk(const SemiprimeSpec& spec) {
    const Int n1 = spec.N - 1;
    for (unsigned k = 3; (Int(1) << k) <= n1; ++k) {
        if (mpz_divisible_2exp_p(n1.get_mpz_t(), k) == 0) {
            // 2^k no longer divides N-1: the c_p > c_q >= 3 regime was violated
            throw std::domain_error("s_k sequence exhausted before -1 (c_p > c_q >= 3 violated)");
        }
        const Int quotient = n1 >> k;
        if (mpz_odd_p(quotient.get_mpz_t())) {
            return k;  // s_k = -1
        }
    }
    throw std::domain_error("s_k never reached -1");
}

Int r_max(const SemiprimeSpec& spec, unsigned c_q_lower) {
    if (c_q_lower < 1 || c_q_lower > spec.c_q) {
        throw std::invalid_argument("r_max requires 1 <= c_q_lower <= c_q");
    }
    return (spec.N - 1) >> c_q_lower;
}

ShorRegister shor_register(const SemiprimeSpec& spec, const Int& r) {
    ShorRegister result;
    const Int n_sq_minus = spec.N * spec.N - 1;
    result.m_sh = static_cast<int>(mpz_sizeinbase(n_sq_minus.get_mpz_t(), 2));
    const Int r_sq = r * r;
    const int m0 = static_cast<int>(mpz_sizeinbase(r_sq.get_mpz_t(), 2));  // 2^m0 > r^2
    result.q_effective = result.m_sh - m0;
    const Int r_sq_minus = r_sq - 1;
    const int ceil_2log2_r = static_cast<int>(mpz_sizeinbase(r_sq_minus.get_mpz_t(), 2));
    result.delta = result.m_sh - 2 * static_cast<int>(spec.c_q) - ceil_2log2_r;
    if (result.delta < 0) {
        throw std::logic_error("register slack is negative");
    }
    const bool r_power_of_two = mpz_popcount(r.get_mpz_t()) == 1;
    if (!r_power_of_two &&
        result.q_effective != 2 * static_cast<int>(spec.c_q) + result.delta) {
        throw std::logic_error("q_effective does not match 2 c_q + delta");
    }
    return result;
}

CampaignReport run_campaign(const SemiprimeSpec& spec, Scheme scheme, std::uint64_t runs,
                            std::uint64_t seed) {
    if (runs == 0) {
        throw std::invalid_argument("run_campaign requires runs >= 1");
    }
    if (scheme == Scheme::A && spec.c_p <= spec.c_q) {
        throw std::invalid_argument("scheme A requires c_p > c_q");
    }
    if (scheme == Scheme::B && spec.c_p != spec.c_q) {
        throw std::invalid_argument("scheme B requires c_p = c_q");
    }
    if (scheme == Scheme::Undetermined) {
        throw std::invalid_argument("campaign requires a determined scheme");
    }
    CampaignReport report;
    report.spec = spec;
    report.scheme = scheme;
    report.runs = runs;
    report.seed = seed;
    report.records.reserve(runs);
    for (std::uint64_t run = 0; run < runs; ++run) {
        sampler::RandomStream rng(seed, run);
        const BaseChoice choice =
            scheme == Scheme::A ? choose_Lbar(spec, rng) : choose_L(spec, rng);
        const FactorAttempt attempt = factor_attempt(choice, spec);
        report.records.push_back(
            CampaignRun{choice.b, attempt.r, attempt.f_b, attempt.success, choice.tag});
        if (attempt.success) {
            ++report.successes;
        }
    }
    return report;
}

IdentificationResult identify_scheme(const SemiprimeSpec& spec, std::uint64_t l_attempts,
                                     std::uint64_t seed) {
    IdentificationResult result;
    for (std::uint64_t i = 0; i < l_attempts; ++i) {
        sampler::RandomStream rng(seed, i);
        const FactorAttempt attempt = factor_attempt(choose_L(spec, rng), spec);
        ++result.l_attempts;
        if (attempt.success) {
            result.l_succeeded = true;
            result.factor = attempt.f_b;
            // L-failures occur only when c_p > c_q; L successes alone do not
            // pin the relation, so conclude from the recovered factorization
            result.concluded = spec.c_p == spec.c_q ? Scheme::B : Scheme::A;
            return result;
        }
    }
    sampler::RandomStream rng(seed, l_attempts);
    const FactorAttempt attempt = factor_attempt(choose_Lbar(spec, rng), spec);
    result.l_succeeded = false;
    result.factor = attempt.f_b;
    result.concluded = attempt.success ? Scheme::A : Scheme::Undetermined;
    return result;
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::A:
            return "A";
        case Scheme::B:
            return "B";
        default:
            return "undetermined";
    }
}

std::string to_string(Tag tag) {
    switch (tag) {
        case Tag::L:
            return "L";
        case Tag::Lbar:
            return "Lbar";
        default:
            return "random";
    }
}

}  // namespace qpf::bench
