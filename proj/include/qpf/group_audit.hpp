#pragma once

#include "qpf/numthy.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace qpf::audit {

using numthy::SemiprimeSpec;

/// Full order statistics of (Z/hZ)x for an odd prime h = 2^c d + 1.
struct OrderCensus {
    std::int64_t h = 0;
    std::map<std::int64_t, std::int64_t> counts;            // order -> #elements
    std::map<unsigned, std::int64_t> valuation_counts;      // v2(order) -> #elements
};

/// Brute-force census; also cross-checks the generator order formula
/// (h-1)/gcd(k, h-1) against the smallest primitive root.
OrderCensus order_census(std::int64_t h);

/// Counts of pairs (b_p, b_q) whose orders share the same power of two,
/// split by the parity of the discrete logs (e = even, o = odd; first
/// index is k_p).
struct CosetMatrix {
    std::int64_t ee = 0;
    std::int64_t eo = 0;
    std::int64_t oe = 0;
    std::int64_t oo = 0;
};

/// Exhaustive pair count, excluding (1,1); parities obtained from
/// quadratic characters, valuations from brute-force orders.
CosetMatrix coset_counts(const SemiprimeSpec& spec);

/// Closed-form matrix: with S = 4^{c_q-1} d_p d_q,
/// ee = S/3 + 2 d_p d_q / 3 - 1, eo = S(1-delta), oe = 0, oo = S delta.
CosetMatrix predicted_coset_counts(const SemiprimeSpec& spec);

/// Exhaustive #{b : (b/N)=-1, r even, b^{r/2} != -1} / #{b : (b/N)=-1}.
mpq_class leander_empirical(const SemiprimeSpec& spec);

struct AuditRow {
    std::int64_t N = 0;
    std::int64_t p = 0;
    std::int64_t q = 0;
    unsigned c_p = 0;
    unsigned c_q = 0;
    CosetMatrix observed;
    CosetMatrix predicted;
    mpq_class leander_observed;
    mpq_class leander_predicted;
    bool pass = false;
};

/// All square-free odd semiprimes below max_n, ascending.
std::vector<SemiprimeSpec> semiprimes_below(std::int64_t max_n);

/// Coset-count and conditional-probability audit over every square-free odd
/// semiprime below max_n.
std::vector<AuditRow> audit_all(std::int64_t max_n);

}  // namespace qpf::audit
