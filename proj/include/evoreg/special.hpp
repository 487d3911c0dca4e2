#pragma once

namespace evoreg {

/// Exponential-integrator weights at z = lambda h >= 0:
///   phi0 = e^{-z}, phi1 = (1 - e^{-z})/z, phi2 = (e^{-z} - 1 + z)/z^2.
/// Equivalently phi1 = int_0^1 e^{-z(1-v)} dv and phi2 = int_0^1 e^{-z(1-v)} v dv.
struct PhiKernels {
    double phi0;
    double phi1;
    double phi2;
};

/// Throws std::invalid_argument for negative or NaN z.
PhiKernels phi_kernels(double z);

/// int_0^1 e^{-z(1-v)} v^p dv for p > -1, z >= 0.
///
/// This is the weight that integrates a history term s^p exactly against the
/// semigroup kernel: int_0^t e^{-lambda(t-s)} s^p ds = t^{p+1} power_kernel(p, lambda t).
/// power_kernel(0, z) = phi1(z), power_kernel(1, z) = phi2(z).
double power_kernel(double p, double z);

/// Euler beta function B(a, b).
double beta_function(double a, double b);

}  // namespace evoreg
