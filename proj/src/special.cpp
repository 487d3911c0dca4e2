#include "evoreg/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace evoreg {

namespace {

// sum_{j>=0} (-z)^j / (j + k)!  for 0 <= z < 1; terms decrease monotonically.
double phi_series(int k, double z) {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    double term = 1.0 / fact;
    double sum = term;
    for (int j = 1; j < 40; ++j) {
        term *= -z / static_cast<double>(j + k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

PhiKernels phi_kernels(double z) {
    if (!(z >= 0.0)) throw std::invalid_argument("phi_kernels: z must be >= 0");
    if (std::isinf(z)) return {0.0, 0.0, 0.0};
    if (z < 1.0) {
        return {std::exp(-z), phi_series(1, z), phi_series(2, z)};
    }
    const double em1 = std::expm1(-z);
    return {std::exp(-z), -em1 / z, (em1 + z) / (z * z)};
}

double power_kernel(double p, double z) {
    if (!(p > -1.0)) throw std::invalid_argument("power_kernel: p must be > -1");
    if (!(z >= 0.0)) throw std::invalid_argument("power_kernel: z must be >= 0");
    if (z == 0.0) return 1.0 / (p + 1.0);

    if (z <= 60.0) {
        // e^{-z} sum_j z^j / (j! (p + 1 + j)): all terms positive.
        double weight = std::exp(-z);
        double sum = weight / (p + 1.0);
        for (int j = 1; j < 100000; ++j) {
            weight *= z / j;
            const double term = weight / (p + 1.0 + j);
            sum += term;
            if (j > z && term < 1e-17 * sum) break;
        }
        return sum;
    }

    // Large z: int_0^inf e^{-z w} (1-w)^p dw expanded in 1/z; the neglected
    // piece beyond w = 1 is O(e^{-z}).
    double term = 1.0 / z;
    double sum = term;
    double best = std::abs(term);
    for (int k = 1; k < 200; ++k) {
        term *= -(p - (k - 1)) / z;
        if (term == 0.0) break;
        if (std::abs(term) > best) break;  // asymptotic series started to diverge
        best = std::abs(term);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double beta_function(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta_function: a, b must be > 0");
    return std::beta(a, b);
}

}  // namespace evoreg
