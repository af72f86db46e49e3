#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpf/factor_bench.hpp"

#include <set>

using qpf::numthy::Int;
using qpf::numthy::SemiprimeSpec;
namespace nt = qpf::numthy;
namespace fb = qpf::bench;
namespace sm = qpf::sampler;

TEST_CASE("generated semiprimes carry the requested valuations") {
    sm::RandomStream rng(11, 0);
    for (unsigned c_p = 1; c_p <= 4; ++c_p) {
        for (unsigned c_q = 1; c_q <= c_p; ++c_q) {
            const SemiprimeSpec spec = fb::gen_semiprime(c_p, c_q, 99, rng);
            CHECK(spec.c_p == c_p);
            CHECK(spec.c_q == c_q);
            CHECK(nt::is_prime(spec.p));
            CHECK(nt::is_prime(spec.q_));
            CHECK(spec.N == spec.p * spec.q_);
            CHECK(spec.d_p <= 99);
            CHECK(spec.d_q <= 99);
        }
    }
    CHECK_THROWS_AS(fb::gen_semiprime(1, 2, 99, rng), std::invalid_argument);
    CHECK_THROWS_AS(fb::gen_semiprime(2, 0, 99, rng), std::invalid_argument);
}

TEST_CASE("base choices satisfy their defining predicates") {
    const SemiprimeSpec spec = SemiprimeSpec::make(5, 13);
    sm::RandomStream rng(3, 0);
    for (int i = 0; i < 50; ++i) {
        const fb::BaseChoice l = fb::choose_L(spec, rng);
        CHECK(nt::jacobi(l.b, spec.N) == -1);
        CHECK(l.is_qnr);
        CHECK(l.tag == fb::Tag::L);
        const fb::BaseChoice lbar = fb::choose_Lbar(spec, rng);
        CHECK(nt::jacobi(lbar.b, spec.N) == 1);
        CHECK(nt::is_qnr(lbar.b, spec));
        CHECK(lbar.tag == fb::Tag::Lbar);
    }
}

TEST_CASE("factoring attempt recovers a prime factor or reports the failure mode") {
    const SemiprimeSpec spec = SemiprimeSpec::make(3, 5);
    // exhaustive over admissible bases
    for (long b = 2; b < 14; ++b) {
        if (nt::gcd(Int(b), spec.N) != 1) continue;
        fb::BaseChoice choice{Int(b), nt::jacobi(Int(b), spec.N),
                              nt::is_qnr(Int(b), spec), fb::Tag::Random};
        const fb::FactorAttempt attempt = fb::factor_attempt(choice, spec);
        if (attempt.success) {
            CHECK((attempt.f_b == 3 || attempt.f_b == 5));
        } else {
            CHECK((attempt.f_b == 1 || attempt.f_b == 15));
        }
        if (!attempt.r_even) {
            CHECK(attempt.f_b == 1);
        }
    }
}

TEST_CASE("conditional success probability as exact rationals") {
    CHECK(fb::leander_prob(1, 1) == 1);
    CHECK(fb::leander_prob(3, 3) == 1);
    CHECK(fb::leander_prob(2, 1) == mpq_class(3, 4));
    CHECK(fb::leander_prob(3, 1) == mpq_class(7, 8));
    CHECK(fb::leander_prob(4, 2) == mpq_class(7, 8));
    CHECK(fb::leander_prob(2, 1) >= mpq_class(3, 4));  // the "at least 75%" bound
    CHECK_THROWS_AS(fb::leander_prob(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(fb::leander_prob(2, 0), std::invalid_argument);
}

TEST_CASE("scheme detection walks the symbol table in order") {
    // N=15: (-1/15) = -1 settles scheme A at level 1
    const fb::SchemeDecision d15 = fb::detect_scheme(SemiprimeSpec::make(3, 5));
    CHECK(d15.scheme == fb::Scheme::A);
    CHECK(d15.evidence.size() == 1);
    CHECK(d15.evidence[0].first == "(-1/N)");
    CHECK(d15.evidence[0].second == -1);

    // N=21: both factors are 3 mod 4, -1 is a non-residue with symbol +1
    const fb::SchemeDecision d21 = fb::detect_scheme(SemiprimeSpec::make(3, 7));
    CHECK(d21.scheme == fb::Scheme::B);
    CHECK(d21.evidence.size() == 2);

    // N=65 = 5 * 13: c_p = c_q = 2, settled at the second level
    const fb::SchemeDecision d65 = fb::detect_scheme(SemiprimeSpec::make(5, 13));
    CHECK(d65.scheme == fb::Scheme::B);

    // N=17 * 41: c_q >= 3 on both sides, undetermined
    const fb::SchemeDecision dund = fb::detect_scheme(SemiprimeSpec::make(17, 41));
    CHECK(dund.scheme == fb::Scheme::Undetermined);
    CHECK(dund.evidence.size() == 4);
}

TEST_CASE("s_k probing returns c_q when c_p > c_q >= 3") {
    // 41 = 2^3*5+1, 97 = 2^5*3+1
    const SemiprimeSpec spec = SemiprimeSpec::make(41, 97);
    REQUIRE(spec.c_p == 5);
    REQUIRE(spec.c_q == 3);
    CHECK(fb::find_cq_by_sk(spec) == 3);
    // 41 * 113 (113 = 2^4*7+1): c_q = 3 again
    CHECK(fb::find_cq_by_sk(SemiprimeSpec::make(41, 113)) == 3);
    // violated regime: N = 21 has v2(N-1) = 2
    CHECK_THROWS_AS(fb::find_cq_by_sk(SemiprimeSpec::make(3, 7)), std::domain_error);
}

TEST_CASE("order bound and register slack") {
    const SemiprimeSpec spec = SemiprimeSpec::make(5, 13);
    CHECK(fb::r_max(spec, 1) == 32);
    CHECK(fb::r_max(spec, 2) == 16);
    CHECK_THROWS_AS(fb::r_max(spec, 0), std::invalid_argument);
    CHECK_THROWS_AS(fb::r_max(spec, 3), std::invalid_argument);

    // every admissible order fits the claimed register decomposition
    for (long b = 2; b < 64; ++b) {
        if (nt::gcd(Int(b), spec.N) != 1) continue;
        const Int r = nt::order(Int(b), spec.N);
        const fb::ShorRegister reg = fb::shor_register(spec, r);
        CHECK(reg.m_sh == 13);  // ceil(2 log2 65)
        CHECK(reg.delta >= 0);
    }
}

TEST_CASE("campaigns succeed with certainty under the matching scheme") {
    // scheme A on N=15 (c_p=2 > c_q=1): every Lbar base factors
    const fb::CampaignReport a =
        fb::run_campaign(SemiprimeSpec::make(3, 5), fb::Scheme::A, 60, 31);
    CHECK(a.successes == 60);
    for (const auto& run : a.records) {
        CHECK(run.tag == fb::Tag::Lbar);
        CHECK((run.f_b == 3 || run.f_b == 5));
    }
    // scheme B on N=21 (c_p=c_q=1): every L base factors
    const fb::CampaignReport b =
        fb::run_campaign(SemiprimeSpec::make(3, 7), fb::Scheme::B, 60, 32);
    CHECK(b.successes == 60);
    for (const auto& run : b.records) {
        CHECK(run.tag == fb::Tag::L);
        CHECK((run.f_b == 3 || run.f_b == 7));
    }
    // mismatches are rejected up front
    CHECK_THROWS_AS(fb::run_campaign(SemiprimeSpec::make(3, 7), fb::Scheme::A, 5, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(fb::run_campaign(SemiprimeSpec::make(3, 5), fb::Scheme::B, 5, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(fb::run_campaign(SemiprimeSpec::make(3, 5), fb::Scheme::A, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("campaigns replay bitwise from their seed") {
    const fb::CampaignReport a =
        fb::run_campaign(SemiprimeSpec::make(3, 5), fb::Scheme::A, 20, 77);
    const fb::CampaignReport b =
        fb::run_campaign(SemiprimeSpec::make(3, 5), fb::Scheme::A, 20, 77);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].b == b.records[i].b);
        CHECK(a.records[i].r == b.records[i].r);
    }
}

TEST_CASE("initial identification concludes the correct scheme") {
    const fb::IdentificationResult a = fb::identify_scheme(SemiprimeSpec::make(3, 5), 3, 5);
    CHECK(a.concluded == fb::Scheme::A);
    CHECK((a.factor == 3 || a.factor == 5));

    const fb::IdentificationResult b = fb::identify_scheme(SemiprimeSpec::make(3, 7), 3, 5);
    CHECK(b.concluded == fb::Scheme::B);
    CHECK(b.l_succeeded);
    CHECK((b.factor == 3 || b.factor == 7));
}

TEST_CASE("enum names round-trip to text") {
    CHECK(fb::to_string(fb::Scheme::A) == "A");
    CHECK(fb::to_string(fb::Scheme::B) == "B");
    CHECK(fb::to_string(fb::Scheme::Undetermined) == "undetermined");
    CHECK(fb::to_string(fb::Tag::L) == "L");
    CHECK(fb::to_string(fb::Tag::Lbar) == "Lbar");
    CHECK(fb::to_string(fb::Tag::Random) == "random");
}
