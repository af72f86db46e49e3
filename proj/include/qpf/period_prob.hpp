#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace qpf::period {

/// A period r split into its odd part and 2-adic valuation, r = r_o * 2^{n_r}.
struct PeriodSpec {
    std::int64_t r = 2;
    std::int64_t r_o = 1;
    unsigned n_r = 0;

    static PeriodSpec from_r(std::int64_t r);
};

/// Input register sized for a period: m is the smallest integer with
/// 2^m > 2^q r^2.
struct RegisterSpec {
    PeriodSpec spec;
    int q = 0;
    int m = 0;
};

/// Smallest admissible increment, ceil(log2 r) - floor(2 log2 r), computed
/// with bit-length arithmetic only.
int q_min(const PeriodSpec& spec);

/// Throws std::invalid_argument when q < q_min (register smaller than 2r).
RegisterSpec register_for(const PeriodSpec& spec, int q);

/// Number of superposition terms for offset k: 1 + floor((2^m - 1 - k)/r).
std::int64_t m_k(std::int64_t k, const RegisterSpec& reg);

/// Structure factor S_k at an exact rational frequency offset x:
/// m_k * [sinc(m_k r x / 2^m) / sinc(r x / 2^m)]^2, removable
/// singularities decided by exact integrality tests.
double structure_factor(const mpq_class& x, std::int64_t k, const RegisterSpec& reg);

/// Integer closest to j 2^m / r (never a half-integer), 1 <= j <= r-1.
std::int64_t x_j(std::int64_t j, const RegisterSpec& reg);

/// The r_o distinct frequency offsets j/r_o over the absolute least
/// residues j in {0, +-1, ..., +-floor(r_o/2)}.
std::vector<mpq_class> delta_set(const PeriodSpec& spec);

/// All x in [0, 2^m) within 2^{q-1} of some harmonic j 2^m / r,
/// j in [1, r-1]; windows are pairwise disjoint by construction.
std::vector<std::int64_t> useful_x_set(const RegisterSpec& reg);

/// Endpoint correction H(q) [S_k(2^{q-1}) + S_k(-2^{q-1})]; zero for q <= 0.
double epsilon_k(std::int64_t k, const RegisterSpec& reg);

/// Exact success probability of period finding for offset k (closed form).
double p_tot_exact(std::int64_t k, const RegisterSpec& reg);

inline constexpr int kOracleMaxM = 26;

/// Independent oracle: direct geometric sum of the structure factor over
/// the useful frequencies. Shares no evaluation path with p_tot_exact.
double p_tot_oracle(std::int64_t k, const RegisterSpec& reg);

/// k-marginal with preparation weights m_k / 2^m.
double p_tot_averaged(const RegisterSpec& reg);

/// Side-by-side probability values for reporting.
struct ProbabilityReport {
    double exact = 0.0;
    std::optional<double> oracle;
    std::optional<double> asymptotic;
    std::optional<double> limit;
    std::optional<std::int64_t> k;  // empty means k-averaged
    PeriodSpec spec;
    RegisterSpec reg;
};

}  // namespace qpf::period
