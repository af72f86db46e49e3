#pragma once

#include "qpf/period_prob.hpp"

#include <utility>
#include <vector>

namespace qpf::asymptotics {

/// Normalized sinc: sin(pi x)/(pi x), sinc(0) = 1.
double sinc(double x);

/// Sine integral Si(x) = int_0^x sin(t)/t dt, odd extension for x < 0.
/// Power series below |x| = 16, auxiliary-function evaluation above.
double sine_integral(double x);

/// Limit probability (2/pi) Si(2^q pi) - (sin(2^{q-1} pi) / (2^{q/2-1} pi))^2
/// for real q.
double p_inf(double q);

/// Dominant finite sum (1/r_o) sum over |j| <= floor(2^{q-1} r_o) of
/// sinc^2(j/r_o); equals 1 when r_o = 1.
double p_asym(const period::PeriodSpec& spec, int q);

/// Leading term and first retained correction of the large-r_o expansion.
struct ExpansionResult {
    double leading = 0.0;
    double correction = 0.0;
    int order_exponent = 0;      // power of 1/r_o of the correction
    unsigned nu = 0;             // least residue of r_o mod 2^{|q|+1}, q < 0 only
};

ExpansionResult expansion(const period::PeriodSpec& spec, int q);

/// r_o * (p_asym - p_inf).
double scaled_deviation(const period::PeriodSpec& spec, int q);

/// Euler-Maclaurin partial sum for q >= 1 with at most four terms:
/// 2 int_0^{a} sinc^2 + f(a)/r_o + f'(a)/(6 r_o^2) - f'''(a)/(360 r_o^4),
/// a = 2^{q-1}.
double em_sum(const period::PeriodSpec& spec, int q, int terms);

/// Sampled p_inf curve over [q_lo, q_hi].
std::vector<std::pair<double, double>> fig1_series(double q_lo, double q_hi, double step);

}  // namespace qpf::asymptotics
