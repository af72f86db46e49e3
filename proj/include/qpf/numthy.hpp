#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>

namespace qpf::numthy {

using Int = mpz_class;

/// odd_part * 2^valuation reconstructs the decomposed integer.
struct Pow2Decomposition {
    Int odd_part;
    unsigned valuation = 0;
};

/// A square-free odd semiprime N = p * q_ with the factor parametrisation
/// p = 2^{c_p} d_p + 1, q_ = 2^{c_q} d_q + 1 (d_p, d_q odd), labels
/// normalized so that c_p >= c_q.
struct SemiprimeSpec {
    Int p;
    Int q_;
    Int N;
    unsigned c_p = 0;
    unsigned c_q = 0;
    Int d_p;
    Int d_q;

    // Validates primality/oddness/distinctness and normalizes the labels.
    static SemiprimeSpec make(const Int& a, const Int& b);
};

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

/// base^exponent mod modulus, square-and-multiply.
Int mod_pow(const Int& base, const Int& exponent, const Int& modulus);

/// Jacobi symbol (a/n) for odd n >= 3, via binary reciprocity.
int jacobi(const Int& a, const Int& n);

/// Legendre symbol of a modulo the odd prime h from the Euler criterion:
/// the least absolute residue of a^{(h-1)/2} mod h. A residue outside
/// {-1, 0, +1} means h is not prime and raises std::domain_error.
int legendre_euler(const Int& a, const Int& h);

inline constexpr std::uint64_t kOrderIterationCap = 10'000'000;

/// Least r >= 1 with b^r = 1 mod n; capped multiplication loop.
Int order(const Int& b, const Int& n, std::uint64_t cap = kOrderIterationCap);

Pow2Decomposition pow2_decompose(const Int& n);

/// lambda(N) = lcm(p-1, q_-1).
Int carmichael(const SemiprimeSpec& spec);

/// Quadratic non-residuosity mod N decided with the known factorization:
/// b is a residue iff it is a residue modulo both prime factors.
bool is_qnr(const Int& b, const SemiprimeSpec& spec);

/// Deterministic in the supported range: trial division below 10^6,
/// fixed-witness Miller-Rabin (valid to 3.3 * 10^24) above it.
bool is_prime(const Int& n);

}  // namespace qpf::numthy
