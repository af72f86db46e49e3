#include "qpf/group_audit.hpp"

#include "qpf/factor_bench.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace qpf::audit {

namespace {

// Per-element data for (Z/hZ)x, h an odd prime: multiplicative order,
// its 2-adic valuation, and the parity of the discrete log (even iff
// quadratic residue).
struct PrimeGroup {
    std::int64_t h = 0;
    unsigned c = 0;
    std::int64_t d = 0;
    std::vector<std::int64_t> order;  // index b in [1, h-1]
    std::vector<unsigned> valuation;
    std::vector<char> log_even;
};

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t h) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % h);
}

std::int64_t brute_order(std::int64_t b, std::int64_t h) {
    std::int64_t power = b % h;
    std::int64_t r = 1;
    while (power != 1) {
        power = mulmod(power, b, h);
        ++r;
    }
    return r;
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t h) {
    std::int64_t result = 1;
    std::int64_t base = b % h;
    while (e > 0) {
        if (e & 1) {
            result = mulmod(result, base, h);
        }
        base = mulmod(base, base, h);
        e >>= 1;
    }
    return result;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> factors;
    for (std::int64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            factors.push_back(f);
            while (n % f == 0) {
                n /= f;
            }
        }
    }
    if (n > 1) {
        factors.push_back(n);
    }
    return factors;
}

std::int64_t smallest_primitive_root(std::int64_t h) {
    const std::vector<std::int64_t> factors = prime_factors(h - 1);
    for (std::int64_t g = 2; g < h; ++g) {
        bool primitive = true;
        for (std::int64_t f : factors) {
            if (powmod(g, (h - 1) / f, h) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            return g;
        }
    }
    throw std::logic_error("no primitive root found");
}

// Enumerates powers of the smallest primitive root, so it is an
// independent route from the brute-force loop in order_census.
PrimeGroup prime_group(std::int64_t h) {
    if (h < 3 || !numthy::is_prime(numthy::Int(static_cast<long>(h)))) {
        throw std::invalid_argument("prime_group requires an odd prime");
    }
    PrimeGroup group;
    group.h = h;
    group.c = static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(h - 1)));
    group.d = (h - 1) >> group.c;
    group.order.assign(static_cast<std::size_t>(h), 0);
    group.valuation.assign(static_cast<std::size_t>(h), 0);
    group.log_even.assign(static_cast<std::size_t>(h), 0);
    const std::int64_t g = smallest_primitive_root(h);
    std::int64_t power = 1;
    for (std::int64_t k = 1; k <= h - 1; ++k) {
        power = mulmod(power, g, h);
        const std::int64_t r = (h - 1) / std::gcd(k, h - 1);
        group.order[static_cast<std::size_t>(power)] = r;
        group.valuation[static_cast<std::size_t>(power)] =
            static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(r)));
        group.log_even[static_cast<std::size_t>(power)] = (k % 2 == 0) ? 1 : 0;
    }
    return group;
}

}  // namespace

OrderCensus order_census(std::int64_t h) {
    if (h > 10000) {
        throw std::invalid_argument("order_census caps h at 10^4");
    }
    if (h < 3 || !numthy::is_prime(numthy::Int(static_cast<long>(h)))) {
        throw std::invalid_argument("order_census requires an odd prime");
    }
    OrderCensus census;
    census.h = h;
    std::vector<std::int64_t> orders(static_cast<std::size_t>(h), 0);
    for (std::int64_t b = 1; b < h; ++b) {
        const std::int64_t r = brute_order(b, h);
        orders[static_cast<std::size_t>(b)] = r;
        ++census.counts[r];
        ++census.valuation_counts[static_cast<unsigned>(
            std::countr_zero(static_cast<std::uint64_t>(r)))];
    }

    // cross-check the order formula against the smallest primitive root
    const std::int64_t generator = smallest_primitive_root(h);
    std::int64_t power = 1;
    for (std::int64_t k = 1; k < h; ++k) {
        power = mulmod(power, generator, h);
        const std::int64_t expected = (h - 1) / std::gcd(k, h - 1);
        if (orders[static_cast<std::size_t>(power)] != expected) {
            throw std::logic_error("generator order formula violated");
        }
    }
    return census;
}

CosetMatrix coset_counts(const SemiprimeSpec& spec) {
    if (spec.N > 1000000) {
        throw std::invalid_argument("coset_counts caps N at 10^6");
    }
    const std::int64_t p = spec.p.get_si();
    const std::int64_t q = spec.q_.get_si();
    const PrimeGroup gp = prime_group(p);
    const PrimeGroup gq = prime_group(q);
    CosetMatrix matrix;
    for (std::int64_t bp = 1; bp < p; ++bp) {
        const unsigned lp = gp.valuation[static_cast<std::size_t>(bp)];
        const bool ep = gp.log_even[static_cast<std::size_t>(bp)] != 0;
        for (std::int64_t bq = 1; bq < q; ++bq) {
            if (bp == 1 && bq == 1) {
                continue;
            }
            if (lp != gq.valuation[static_cast<std::size_t>(bq)]) {
                continue;
            }
            const bool eq = gq.log_even[static_cast<std::size_t>(bq)] != 0;
            if (ep) {
                ++(eq ? matrix.ee : matrix.eo);
            } else {
                ++(eq ? matrix.oe : matrix.oo);
            }
        }
    }
    return matrix;
}

CosetMatrix predicted_coset_counts(const SemiprimeSpec& spec) {
    const std::int64_t d_p = spec.d_p.get_si();
    const std::int64_t d_q = spec.d_q.get_si();
    const std::int64_t s = (std::int64_t{1} << (2 * (spec.c_q - 1))) * d_p * d_q;
    const bool equal_c = spec.c_p == spec.c_q;
    if ((s + 2 * d_p * d_q) % 3 != 0) {
        throw std::logic_error("closed-form ee count is not integral");
    }
    CosetMatrix matrix;
    matrix.ee = (s + 2 * d_p * d_q) / 3 - 1;
    matrix.eo = equal_c ? 0 : s;
    matrix.oe = 0;
    matrix.oo = equal_c ? s : 0;
    return matrix;
}

mpq_class leander_empirical(const SemiprimeSpec& spec) {
    if (spec.N > 1000000) {
        throw std::invalid_argument("leander_empirical caps N at 10^6");
    }
    const std::int64_t p = spec.p.get_si();
    const std::int64_t q = spec.q_.get_si();
    const std::int64_t n = spec.N.get_si();
    const PrimeGroup gp = prime_group(p);
    const PrimeGroup gq = prime_group(q);
    std::int64_t eligible = 0;
    std::int64_t good = 0;
    for (std::int64_t b = 1; b < n; ++b) {
        const std::int64_t bp = b % p;
        const std::int64_t bq = b % q;
        if (bp == 0 || bq == 0) {
            continue;
        }
        const bool even_p = gp.log_even[static_cast<std::size_t>(bp)] != 0;
        const bool even_q = gq.log_even[static_cast<std::size_t>(bq)] != 0;
        if (even_p == even_q) {
            continue;  // Jacobi symbol +1
        }
        ++eligible;
        const std::int64_t r = std::lcm(gp.order[static_cast<std::size_t>(bp)],
                                        gq.order[static_cast<std::size_t>(bq)]);
        if (r % 2 != 0) {
            continue;
        }
        // b^{r/2} = -1 mod N iff it is -1 modulo both prime factors
        const std::int64_t hp = powmod(bp, r / 2, p);
        const std::int64_t hq = powmod(bq, r / 2, q);
        if (!(hp == p - 1 && hq == q - 1)) {
            ++good;
        }
    }
    mpq_class ratio(good, eligible);
    ratio.canonicalize();
    return ratio;
}

std::vector<SemiprimeSpec> semiprimes_below(std::int64_t max_n) {
    std::vector<std::int64_t> primes;
    for (std::int64_t h = 3; h * 3 < max_n; h += 2) {
        if (numthy::is_prime(numthy::Int(static_cast<long>(h)))) {
            primes.push_back(h);
        }
    }
    std::vector<std::pair<std::int64_t, std::pair<std::int64_t, std::int64_t>>> products;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (std::size_t j = i + 1; j < primes.size(); ++j) {
            const std::int64_t n = primes[i] * primes[j];
            if (n >= max_n) {
                break;
            }
            products.emplace_back(n, std::make_pair(primes[i], primes[j]));
        }
    }
    std::sort(products.begin(), products.end());
    std::vector<SemiprimeSpec> specs;
    specs.reserve(products.size());
    for (const auto& [n, pq] : products) {
        specs.push_back(SemiprimeSpec::make(numthy::Int(static_cast<long>(pq.first)),
                                            numthy::Int(static_cast<long>(pq.second))));
    }
    return specs;
}

std::vector<AuditRow> audit_all(std::int64_t max_n) {
    std::vector<AuditRow> rows;
    for (const SemiprimeSpec& spec : semiprimes_below(max_n)) {
        AuditRow row;
        row.N = spec.N.get_si();
        row.p = spec.p.get_si();
        row.q = spec.q_.get_si();
        row.c_p = spec.c_p;
        row.c_q = spec.c_q;
        row.observed = coset_counts(spec);
        row.predicted = predicted_coset_counts(spec);
        row.leander_observed = leander_empirical(spec);
        row.leander_predicted = bench::leander_prob(spec.c_p, spec.c_q);
        row.pass = row.observed.ee == row.predicted.ee && row.observed.eo == row.predicted.eo &&
                   row.observed.oe == row.predicted.oe && row.observed.oo == row.predicted.oo &&
                   row.leander_observed == row.leander_predicted;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qpf::audit
