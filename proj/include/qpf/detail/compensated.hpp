#pragma once

#include <cmath>

namespace qpf::detail {

// Kahan-Neumaier compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double value) {
        const double t = sum + value;
        if (std::abs(sum) >= std::abs(value)) {
            comp += (sum - t) + value;
        } else {
            comp += (value - t) + sum;
        }
        sum = t;
    }

    double result() const { return sum + comp; }
};

}  // namespace qpf::detail
