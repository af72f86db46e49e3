#include "qpf/period_prob.hpp"

#include "qpf/asymptotics.hpp"

#include "qpf/detail/compensated.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qpf::period {

namespace {

mpq_class rat(std::int64_t num, std::int64_t den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

int bit_width_ll(std::int64_t v) {
    return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v)));
}

void check_k(std::int64_t k, const RegisterSpec& reg) {
    if (k < 0 || k >= reg.spec.r) {
        throw std::invalid_argument("residue k out of [0, r)");
    }
}

}  // namespace

PeriodSpec PeriodSpec::from_r(std::int64_t r) {
    if (r < 2) {
        throw std::invalid_argument("period must be >= 2");
    }
    PeriodSpec spec;
    spec.r = r;
    spec.n_r = static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(r)));
    spec.r_o = r >> spec.n_r;
    return spec;
}

int q_min(const PeriodSpec& spec) {
    const int ceil_log2 = bit_width_ll(spec.r - 1);
    const int floor_2log2 = bit_width_ll(spec.r * spec.r) - 1;
    return ceil_log2 - floor_2log2;
}

RegisterSpec register_for(const PeriodSpec& spec, int q) {
    if (q < q_min(spec)) {
        throw std::invalid_argument("q below q_min: register would be smaller than 2r");
    }
    const int m = bit_width_ll(spec.r * spec.r) + q;
    if (m > 62) {
        throw std::invalid_argument("register size exceeds 62 bits");
    }
    return RegisterSpec{spec, q, m};
}

std::int64_t m_k(std::int64_t k, const RegisterSpec& reg) {
    check_k(k, reg);
    return 1 + (((std::int64_t{1} << reg.m) - 1 - k) / reg.spec.r);
}

double structure_factor(const mpq_class& x, std::int64_t k, const RegisterSpec& reg) {
    const std::int64_t mk = m_k(k, reg);
    mpq_class a1 = x * reg.spec.r;
    a1 /= mpq_class(std::int64_t{1} << reg.m);
    a1.canonicalize();
    if (a1.get_den() == 1) {
        // all phases coincide
        return static_cast<double>(mk);
    }
    mpq_class a2 = a1 * mk;
    a2.canonicalize();
    if (a2.get_den() == 1) {
        return 0.0;  // sinc vanishes at a non-zero integer
    }
    const double ratio = asymptotics::sinc(a2.get_d()) / asymptotics::sinc(a1.get_d());
    return static_cast<double>(mk) * ratio * ratio;
}

std::int64_t x_j(std::int64_t j, const RegisterSpec& reg) {
    if (j < 1 || j >= reg.spec.r) {
        throw std::invalid_argument("j out of [1, r-1]");
    }
    const std::int64_t r = reg.spec.r;
    return ((j << (reg.m + 1)) + r) / (2 * r);
}

std::vector<mpq_class> delta_set(const PeriodSpec& spec) {
    std::vector<mpq_class> deltas;
    deltas.reserve(static_cast<std::size_t>(spec.r_o));
    deltas.emplace_back(0);
    for (std::int64_t j = 1; j <= spec.r_o / 2; ++j) {
        deltas.push_back(rat(-j, spec.r_o));
        deltas.push_back(rat(j, spec.r_o));
    }
    return deltas;
}

std::vector<std::int64_t> useful_x_set(const RegisterSpec& reg) {
    const std::int64_t r = reg.spec.r;
    const std::int64_t two_m = std::int64_t{1} << reg.m;
    std::vector<std::int64_t> xs;
    std::int64_t prev = -1;
    for (std::int64_t j = 1; j < r; ++j) {
        const std::int64_t center_num = j << reg.m;  // window center is center_num / r
        const std::int64_t nearest = (2 * center_num + r) / (2 * r);
        const std::int64_t halfspan = (std::int64_t{1} << std::max(reg.q, 1)) + 1;
        for (std::int64_t x = nearest - halfspan; x <= nearest + halfspan; ++x) {
            if (x < 0 || x >= two_m) {
                continue;
            }
            // |x r - j 2^m| < 2^{q-1} r, decided in integers
            const std::int64_t diff = std::abs(x * r - center_num);
            const bool inside = reg.q >= 1 ? 2 * diff < (r << reg.q)
                                           : (diff << (1 - reg.q)) < r;
            if (inside) {
                if (x <= prev) {
                    throw std::logic_error("useful-x windows overlap");
                }
                prev = x;
                xs.push_back(x);
            }
        }
    }
    return xs;
}

double epsilon_k(std::int64_t k, const RegisterSpec& reg) {
    check_k(k, reg);
    if (reg.q < 1) {
        return 0.0;
    }
    const mpq_class endpoint(std::int64_t{1} << (reg.q - 1));
    return structure_factor(endpoint, k, reg) + structure_factor(mpq_class(-endpoint), k, reg);
}

double p_tot_exact(std::int64_t k, const RegisterSpec& reg) {
    check_k(k, reg);
    const std::int64_t r = reg.spec.r;
    const std::int64_t r_o = reg.spec.r_o;

    // |j| <= floor(2^{q-1} r_o) for the main sum, floor(2^{q-1}) for the
    // self-interference sum
    const std::int64_t bound_main = reg.q >= 1 ? (r_o << (reg.q - 1)) : (r_o >> (1 - reg.q));
    const std::int64_t bound_self = reg.q >= 1 ? (std::int64_t{1} << (reg.q - 1)) : 0;

    detail::CompensatedSum main_sum;
    main_sum.add(structure_factor(mpq_class(0), k, reg));
    for (std::int64_t j = 1; j <= bound_main; ++j) {
        main_sum.add(structure_factor(rat(j, r_o), k, reg));
        main_sum.add(structure_factor(rat(-j, r_o), k, reg));
    }

    detail::CompensatedSum self_sum;
    self_sum.add(structure_factor(mpq_class(0), k, reg));
    for (std::int64_t j = 1; j <= bound_self; ++j) {
        self_sum.add(structure_factor(mpq_class(j), k, reg));
        self_sum.add(structure_factor(mpq_class(-j), k, reg));
    }

    const double eps = epsilon_k(k, reg);
    const double bracket = main_sum.result() / static_cast<double>(r_o) -
                           self_sum.result() / static_cast<double>(r) -
                           (1.0 / static_cast<double>(r_o) - 1.0 / static_cast<double>(r)) * eps;
    return static_cast<double>(r) / std::ldexp(1.0, reg.m) * bracket;
}

double p_tot_oracle(std::int64_t k, const RegisterSpec& reg) {
    check_k(k, reg);
    if (reg.m > kOracleMaxM) {
        throw std::invalid_argument("oracle register cap exceeded (m > 26)");
    }
    const std::int64_t mk = m_k(k, reg);
    const std::uint64_t mask = (std::uint64_t{1} << reg.m) - 1;
    const double two_pi_over_2m = 2.0 * M_PI / std::ldexp(1.0, reg.m);

    detail::CompensatedSum total;
    for (std::int64_t x : useful_x_set(reg)) {
        const std::uint64_t step = (static_cast<std::uint64_t>(reg.spec.r) *
                                    static_cast<std::uint64_t>(x)) & mask;
        std::complex<double> acc{0.0, 0.0};
        std::uint64_t phase = 0;
        for (std::int64_t l = 0; l < mk; ++l) {
            acc += std::polar(1.0, two_pi_over_2m * static_cast<double>(phase));
            phase = (phase + step) & mask;
        }
        total.add(std::norm(acc) / static_cast<double>(mk));
    }
    return total.result() / std::ldexp(1.0, reg.m);
}

double p_tot_averaged(const RegisterSpec& reg) {
    detail::CompensatedSum avg;
    const double two_m = std::ldexp(1.0, reg.m);
    for (std::int64_t k = 0; k < reg.spec.r; ++k) {
        avg.add(static_cast<double>(m_k(k, reg)) / two_m * p_tot_exact(k, reg));
    }
    return avg.result();
}

}  // namespace qpf::period
