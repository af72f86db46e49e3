#include "qpf/numthy.hpp"

#include <array>

namespace qpf::numthy {

Int gcd(const Int& a, const Int& b) {
    if (a == 0 && b == 0) {
        throw std::invalid_argument("gcd(0, 0) is undefined");
    }
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int lcm(const Int& a, const Int& b) {
    if (a < 1 || b < 1) {
        throw std::invalid_argument("lcm requires positive arguments");
    }
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Int mod_pow(const Int& base, const Int& exponent, const Int& modulus) {
    if (modulus < 2) {
        throw std::invalid_argument("mod_pow requires modulus >= 2");
    }
    if (exponent < 0) {
        throw std::invalid_argument("mod_pow requires a non-negative exponent");
    }
    Int b = base % modulus;
    if (b < 0) {
        b += modulus;
    }
    Int result = 1;
    Int e = exponent;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        e >>= 1;
    }
    return result;
}

int jacobi(const Int& a, const Int& n) {
    if (n < 3 || mpz_even_p(n.get_mpz_t())) {
        throw std::invalid_argument("jacobi requires odd n >= 3");
    }
    Int x = a % n;
    if (x < 0) {
        x += n;
    }
    Int y = n;
    int sign = 1;
    while (x != 0) {
        unsigned long twos = mpz_scan1(x.get_mpz_t(), 0);
        x >>= twos;
        // (2/y) = -1 iff y = 3, 5 (mod 8)
        if (twos % 2 == 1) {
            unsigned long y8 = mpz_fdiv_ui(y.get_mpz_t(), 8);
            if (y8 == 3 || y8 == 5) {
                sign = -sign;
            }
        }
        // reciprocity: flip sign iff x = y = 3 (mod 4)
        if (mpz_fdiv_ui(x.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(y.get_mpz_t(), 4) == 3) {
            sign = -sign;
        }
        std::swap(x, y);
        x %= y;
    }
    return y == 1 ? sign : 0;
}

int legendre_euler(const Int& a, const Int& h) {
    if (h < 3 || mpz_even_p(h.get_mpz_t())) {
        throw std::invalid_argument("legendre_euler requires an odd prime");
    }
    Int residue = mod_pow(a, (h - 1) / 2, h);
    // least absolute residue
    if (residue > h / 2) {
        residue -= h;
    }
    if (residue == 0) {
        return 0;
    }
    if (residue == 1) {
        return 1;
    }
    if (residue == -1) {
        return -1;
    }
    throw std::domain_error("Euler criterion residue outside {-1,0,+1}: modulus is not prime");
}

Int order(const Int& b, const Int& n, std::uint64_t cap) {
    if (n < 2) {
        throw std::invalid_argument("order requires n >= 2");
    }
    if (gcd(b < 0 ? Int(-b) : b, n) != 1) {
        throw std::invalid_argument("order requires gcd(b, n) = 1");
    }
    Int x = b % n;
    if (x < 0) {
        x += n;
    }
    Int power = x;
    Int r = 1;
    while (power != 1) {
        power = power * x % n;
        ++r;
        if (r > Int(static_cast<unsigned long>(cap))) {
            throw std::runtime_error("order iteration cap exceeded");
        }
    }
    return r;
}

Pow2Decomposition pow2_decompose(const Int& n) {
    if (n < 1) {
        throw std::invalid_argument("pow2_decompose requires n >= 1");
    }
    unsigned long v = mpz_scan1(n.get_mpz_t(), 0);
    return Pow2Decomposition{n >> v, static_cast<unsigned>(v)};
}

Int carmichael(const SemiprimeSpec& spec) {
    return lcm(spec.p - 1, spec.q_ - 1);
}

bool is_qnr(const Int& b, const SemiprimeSpec& spec) {
    if (gcd(b < 0 ? Int(-b) : b, spec.N) != 1) {
        throw std::invalid_argument("is_qnr requires gcd(b, N) = 1");
    }
    return !(legendre_euler(b, spec.p) == 1 && legendre_euler(b, spec.q_) == 1);
}

bool is_prime(const Int& n) {
    if (n < 2) {
        return false;
    }
    if (n < 4) {
        return true;
    }
    if (mpz_even_p(n.get_mpz_t())) {
        return false;
    }
    if (n < 1'000'000) {
        for (Int d = 3; d * d <= n; d += 2) {
            if (n % d == 0) {
                return false;
            }
        }
        return true;
    }
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 81) {
        // witness set below is only proven up to 3.3 * 10^24
        throw std::invalid_argument("is_prime input exceeds the deterministic range");
    }
    const Pow2Decomposition d = pow2_decompose(n - 1);
    constexpr std::array<unsigned, 13> witnesses = {2,  3,  5,  7,  11, 13, 17,
                                                   19, 23, 29, 31, 37, 41};
    for (unsigned a : witnesses) {
        if (n == a) {
            return true;
        }
        Int x = mod_pow(a, d.odd_part, n);
        if (x == 1 || x == n - 1) {
            continue;
        }
        bool composite = true;
        for (unsigned i = 1; i < d.valuation; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

SemiprimeSpec SemiprimeSpec::make(const Int& a, const Int& b) {
    if (a == b) {
        throw std::invalid_argument("semiprime factors must be distinct");
    }
    if (mpz_even_p(a.get_mpz_t()) || mpz_even_p(b.get_mpz_t()) || a < 3 || b < 3) {
        throw std::invalid_argument("semiprime factors must be odd primes");
    }
    if (!is_prime(a) || !is_prime(b)) {
        throw std::invalid_argument("semiprime factors must be prime");
    }
    const Pow2Decomposition da = pow2_decompose(a - 1);
    const Pow2Decomposition db = pow2_decompose(b - 1);
    SemiprimeSpec spec;
    if (da.valuation >= db.valuation) {
        spec.p = a;
        spec.q_ = b;
        spec.c_p = da.valuation;
        spec.c_q = db.valuation;
        spec.d_p = da.odd_part;
        spec.d_q = db.odd_part;
    } else {
        spec.p = b;
        spec.q_ = a;
        spec.c_p = db.valuation;
        spec.c_q = da.valuation;
        spec.d_p = db.odd_part;
        spec.d_q = da.odd_part;
    }
    spec.N = a * b;
    return spec;
}

}  // namespace qpf::numthy
