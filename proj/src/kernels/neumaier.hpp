#pragma once

#include <cmath>

namespace pusurv::kernels::detail {

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double result() const { return sum + comp; }
};

}  // namespace pusurv::kernels::detail
