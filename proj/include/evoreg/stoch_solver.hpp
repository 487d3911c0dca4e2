#pragma once

#include "evoreg/det_solver.hpp"
#include "evoreg/gates.hpp"
#include "evoreg/holder.hpp"
#include "evoreg/report.hpp"
#include "evoreg/spectral.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace evoreg {

/// G given by its diagonal multipliers s -> g_n(s).
struct NoiseSpec {
    std::function<DiagonalHS(double)> multipliers;
    double beta = 1.0;
    double sigma = 0.25;
    std::string name = "custom";
    /// g does not depend on s; enables closed-form oracles.
    bool constant_in_time = false;
    /// Cylindrical identity noise: outside the noise gate, excluded from
    /// theorem checks, accepted only by the sampler and the oracle.
    bool walsh = false;
    /// g_n(s) = a_n s^p exactly; lets the oracle integrate in closed form.
    std::optional<double> power_in_time;

    GateResult gate() const;
};

/// g_n(s) = value for every mode.
NoiseSpec constant_noise(std::size_t n_modes, double value, double beta, double sigma);
/// g_n(s) = lambda_n^{-1} s^{beta-1}.
NoiseSpec smooth_decay_noise(const SpectralOperator& op, double beta, double sigma);
/// g_n(s) = lambda_n^{-1}, constant in time.
NoiseSpec inverse_eigen_noise(const SpectralOperator& op, double beta, double sigma);
/// g_n = 1: cylindrical white noise, flagged.
NoiseSpec walsh_white_noise(std::size_t n_modes);

/// One sampled path of the stochastic convolution with the data needed to
/// replay it: the Brownian increments dW_n over each step and the frozen
/// multipliers g_n(m_k) used on that step.
struct SampledPath {
    Trajectory path;
    std::vector<SpectralVector> increments;   // K entries
    std::vector<SpectralVector> multipliers;  // K entries
};

struct SamplerOptions {
    bool record_increments = false;
};

/// Exact OU recursion with the multiplier frozen at each step midpoint:
///   X_n(t_{k+1}) = e^{-lambda_n h} X_n(t_k) + eta,
///   Var eta = g_n(m_k)^2 (1 - e^{-2 lambda_n h}) / (2 lambda_n),
/// eta drawn jointly with dW_n over the same step. The path starts at 0.
/// Gaussian draws come from the substream (seed, replica, mode).
SampledPath sample_stochastic_convolution(const SpectralOperator& op, const NoiseSpec& noise,
                                          const GradedMesh& mesh, std::uint64_t seed,
                                          std::uint32_t replica, SamplerOptions options = {});

/// E||A^theta W_G(t)||^2 = sum_n lambda_n^{2 theta} int_0^t e^{-2 lambda_n (t-s)} g_n(s)^2 ds.
double ito_isometry_oracle(const SpectralOperator& op, const NoiseSpec& noise, double t,
                           double theta = 0.0);

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t replicas = 0;
    std::uint64_t seed = 0;
};

/// Per-node Monte Carlo moments of X = X_det + W_G.
struct MCMoments {
    std::vector<double> times;
    std::vector<MCEstimate> norm;          // E||X(t)||
    std::vector<MCEstimate> norm_sq;       // E||X(t)||^2
    std::vector<MCEstimate> lifted_norm;   // E||A^{alpha1} X(t)||
};

struct MCOptions {
    std::size_t replicas = 1000;
    std::uint64_t seed = 1;
    double alpha1 = 0.0;
    /// Enforce the 0 < alpha1 <= 1/2 - sigma gate; off for plain moment runs.
    bool check_alpha1 = false;
    std::size_t workers = 0;  // 0: EVOREG_THREADS or hardware concurrency
};

/// Replicas are reduced in fixed blocks in replica-index order, so the result is
/// bitwise independent of the worker count. `deterministic` is the mild solution
/// without noise on the same mesh (null means xi = 0 and F = 0).
MCMoments mc_expected_norms(const SpectralOperator& op, const NoiseSpec* noise,
                            const Trajectory* deterministic, const GradedMesh& mesh,
                            const MCOptions& options);

struct HolderExponentEstimate {
    double exponent = 0.0;
    double band_lo = 0.0;  // bootstrap 5%
    double band_hi = 0.0;  // bootstrap 95%
    std::vector<double> lags;
    std::vector<double> statistic;  // median over paths of the per-path max increment
};

/// Fits log(median_paths max_pairs ||X(t+l) - X(t)||) against log l over dyadic lags on
/// [epsilon, T]. Lags run up to 1/8 of the window, or 1/2 when that leaves fewer than three.
/// Requires uniformly spaced nodes there, at least 16 nodes and at least 10 paths.
/// Paths that are all constant on the window give an infinite exponent.
HolderExponentEstimate estimate_holder_exponent(const std::vector<Trajectory>& paths,
                                                double epsilon, double horizon,
                                                std::uint64_t bootstrap_seed = 7,
                                                std::size_t bootstrap_samples = 200);

struct WeakResidualOptions {
    /// Replace lambda_n in the A* h term (falsification control).
    std::optional<double> lambda_override;
};

/// |<X(t_k),e_n> - <xi,e_n> - sum trapezoid(F_n - lambda_n X_n) - sum g_n dW_n| per node.
/// `forcing` may be null for F = 0; otherwise F_n = lambda_n^alpha (A^{-alpha}F)_n.
std::vector<double> weak_residual(const SpectralOperator& op, const SampledPath& sample,
                                  const SpectralVector& xi, const ForcingSpec* forcing,
                                  std::size_t mode, WeakResidualOptions options = {});

/// Every `factor`-th node of a recorded path: increments summed over the merged
/// steps, multipliers re-evaluated at the coarse midpoints.
SampledPath coarsen(const SampledPath& sample, std::size_t factor, const NoiseSpec& noise);

struct StochOptions {
    std::size_t replicas = 1000;
    std::uint64_t seed = 1;
    double alpha1 = 0.3;
    double gamma = 0.15;
    double epsilon = 0.1;
    double nu = 0.25;
    double constant_stability = 0.10;
    double norm_stability = 0.10;
    std::size_t path_count = 64;
    std::size_t path_steps = 512;
    bool refine = true;
    std::size_t workers = 0;
};

/// Empirical constant, moment regularity and path regularity for F = 0.
VerificationReport verify_theorem2(const SpectralOperator& op, const NoiseSpec& noise,
                                   const SpectralVector& xi, const GradedMesh& mesh,
                                   const StochOptions& options);

/// As verify_theorem2 with deterministic forcing; the denominator is
/// ||A^beta xi|| + ||A^-a F|| t^(b-a) + ||G|| t^(b-1/2).
VerificationReport verify_theorem3(const SpectralOperator& op, const NoiseSpec& noise,
                                   const ForcingSpec& forcing, const SpectralVector& xi,
                                   const GradedMesh& mesh, const StochOptions& options);

/// G sampled on the mesh nodes t > 0 as elements of l2 (the L2(U;H) coordinates).
Trajectory sample_noise_multipliers(const NoiseSpec& noise, const GradedMesh& mesh);

}  // namespace evoreg
