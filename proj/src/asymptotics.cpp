#include "qpf/asymptotics.hpp"

#include "qpf/detail/compensated.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace qpf::asymptotics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesSwitch = 16.0;

// Si(x) by the alternating power series, long double accumulation.
double si_series(double x) {
    const long double xl = x;
    const long double x2 = xl * xl;
    long double term = xl;  // x^{2n+1} / (2n+1)!
    long double sum = xl;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / static_cast<long double>(2 * n * (2 * n + 1));
        const long double contrib = term / static_cast<long double>(2 * n + 1);
        sum += contrib;
        if (fabsl(contrib) < 1e-20L * fabsl(sum) + 1e-22L) {
            break;
        }
    }
    return static_cast<double>(sum);
}

// E1(z) by the modified Lentz continued fraction; used on the imaginary
// axis where Si(x) = pi/2 + Im E1(ix).
std::complex<double> e1_continued_fraction(std::complex<double> z) {
    constexpr double tiny = 1e-290;
    std::complex<double> b = z + 1.0;
    std::complex<double> c = 1.0 / tiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 1; i < 400; ++i) {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return std::exp(-z) * h;
}

double si_large(double x) {
    const std::complex<double> e1 = e1_continued_fraction({0.0, x});
    return kPi / 2 + e1.imag();
}

}  // namespace

double sinc(double x) {
    if (x == 0.0) {
        return 1.0;
    }
    return std::sin(kPi * x) / (kPi * x);
}

double sine_integral(double x) {
    if (x < 0.0) {
        return -sine_integral(-x);
    }
    if (x < kSeriesSwitch) {
        return si_series(x);
    }
    return si_large(x);
}

double p_inf(double q) {
    const double leading = 2.0 / kPi * sine_integral(std::exp2(q) * kPi);
    double oscillation;
    if (q >= 1.0 && q == std::rint(q)) {
        oscillation = 0.0;  // sin(2^{q-1} pi) vanishes at an integer multiple
    } else {
        const double s = std::sin(std::exp2(q - 1.0) * kPi) / (std::exp2(q / 2.0 - 1.0) * kPi);
        oscillation = s * s;
    }
    return leading - oscillation;
}

double p_asym(const period::PeriodSpec& spec, int q) {
    const std::int64_t r_o = spec.r_o;
    if (r_o == 1) {
        return 1.0;
    }
    std::int64_t bound = 0;
    if (q >= 1) {
        bound = r_o << (q - 1);
    } else if (1 - q < 63) {
        bound = r_o >> (1 - q);
    }
    detail::CompensatedSum sum;
    sum.add(1.0);
    for (std::int64_t j = bound; j >= 1; --j) {
        const double s = sinc(static_cast<double>(j) / static_cast<double>(r_o));
        sum.add(2.0 * s * s);
    }
    return sum.result() / static_cast<double>(r_o);
}

ExpansionResult expansion(const period::PeriodSpec& spec, int q) {
    const std::int64_t r_o = spec.r_o;
    if (r_o < 3) {
        throw std::invalid_argument("expansion requires odd r_o >= 3");
    }
    const double ro = static_cast<double>(r_o);
    ExpansionResult result;
    if (q >= 1) {
        result.leading = 2.0 / kPi * sine_integral(std::exp2(q) * kPi);
        result.correction = 4.0 / (15.0 * std::pow(8.0, q)) / (ro * ro * ro * ro);
        result.order_exponent = 4;
    } else if (q == 0) {
        result.leading = 2.0 / kPi * (sine_integral(kPi) - 2.0 / kPi);
        result.correction = 4.0 / (3.0 * kPi * kPi) / (ro * ro);
        result.order_exponent = 2;
    } else {
        const std::int64_t modulus = std::int64_t{1} << (-q + 1);
        result.nu = static_cast<unsigned>(r_o % modulus);
        const double half = sinc(std::exp2(q - 1.0));
        const double sinc2 = half * half;
        result.leading = 2.0 / kPi * sine_integral(std::exp2(q) * kPi) - std::exp2(q) * sinc2;
        result.correction =
            sinc2 * (1.0 - static_cast<double>(result.nu) / std::exp2(-q)) / ro;
        result.order_exponent = 1;
    }
    return result;
}

double scaled_deviation(const period::PeriodSpec& spec, int q) {
    if (spec.r_o == 1) {
        throw std::invalid_argument("scaled deviation is not defined for r_o = 1");
    }
    return static_cast<double>(spec.r_o) * (p_asym(spec, q) - p_inf(q));
}

double em_sum(const period::PeriodSpec& spec, int q, int terms) {
    if (q < 1) {
        throw std::invalid_argument("em_sum requires q >= 1");
    }
    if (terms < 1 || terms > 4) {
        throw std::invalid_argument("em_sum supports 1 to 4 terms");
    }
    const double a = std::exp2(q - 1);  // positive integer, so sinc^2 and its
                                        // first derivative vanish there
    const double ro = static_cast<double>(spec.r_o);
    double sum = 2.0 / kPi * sine_integral(2.0 * kPi * a);
    if (terms >= 4) {
        // f'''(a) = -12/a^3 for sinc^2 at integer a
        sum += 1.0 / (30.0 * a * a * a * ro * ro * ro * ro);
    }
    return sum;
}

std::vector<std::pair<double, double>> fig1_series(double q_lo, double q_hi, double step) {
    if (!(q_lo < q_hi) || !(step > 0.0)) {
        throw std::invalid_argument("fig1_series requires q_lo < q_hi and step > 0");
    }
    std::vector<std::pair<double, double>> points;
    for (double q = q_lo; q <= q_hi + step / 2; q += step) {
        points.emplace_back(q, p_inf(q));
    }
    return points;
}

}  // namespace qpf::asymptotics
