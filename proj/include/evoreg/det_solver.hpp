#pragma once

#include "evoreg/gates.hpp"
#include "evoreg/holder.hpp"
#include "evoreg/report.hpp"
#include "evoreg/spectral.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace evoreg {

/// Nodes t_k = T (k/K)^r, k = 0..K.
class GradedMesh {
public:
    GradedMesh(double horizon, std::size_t steps, double grading);

    double horizon() const noexcept { return horizon_; }
    std::size_t steps() const noexcept { return steps_; }
    double grading() const noexcept { return grading_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    double node(std::size_t k) const { return nodes_[k]; }

    GradedMesh refined(std::size_t factor = 2) const { return {horizon_, steps_ * factor, grading_}; }

private:
    double horizon_;
    std::size_t steps_;
    double grading_;
    std::vector<double> nodes_;
};

/// Forcing given through its reduced form s -> A^{-alpha} F(s) on (0, T].
struct ForcingSpec {
    std::function<SpectralVector(double)> reduced;
    double alpha = 0.5;
    double beta = 1.0;
    double sigma = 0.5;
    /// c in A^{-alpha}F(s) = c s^{beta-1} + o(s^{beta-1}); estimated from two
    /// small-s samples when absent.
    std::optional<SpectralVector> singular_coeff;

    GateResult gate() const { return validate_H3(alpha, beta, sigma); }
};

/// F = 0 with the given exponents, used for pure initial-value runs.
ForcingSpec zero_forcing(std::size_t n_modes, double alpha, double beta, double sigma);

/// Reduced forcing sampled on the mesh nodes t > 0.
Trajectory sample_reduced_forcing(const ForcingSpec& forcing, const GradedMesh& mesh);

struct MildSolution {
    Trajectory path;  // includes the t = 0 node
    SpectralVector singular_coeff;
    std::vector<std::string> warnings;
};

/// X(t) = S(t) xi + A^alpha int_0^t S(t-s) A^{-alpha}F(s) ds, per mode.
///
/// The singular part c s^{beta-1} is integrated in closed form at every node.
/// The remainder is interpolated piecewise linearly with exact exponential
/// weights, except on [0, t_1] where the line through t_1/2 and t_1 is extrapolated to 0.
/// Throws GateViolation when the forcing gate fails.
MildSolution solve_mild_deterministic(const SpectralOperator& op, const SpectralVector& xi,
                                      const ForcingSpec& forcing, const GradedMesh& mesh);

/// A^theta applied node-wise.
Trajectory apply_power(const SpectralOperator& op, double theta, const Trajectory& traj);

struct Theorem1Options {
    /// Regularity exponents gamma in [0, sigma]; empty means {0, sigma/2, sigma}.
    std::vector<double> gammas;
    double ratio_tolerance = 0.02;
    double ratio_stability = 0.02;
    double norm_stability = 0.05;
    /// Re-run at 2K for the refinement rows.
    bool refine = true;
    /// Emit the bound-ratio series.
    bool with_series = true;
};

/// Growth bound ||X(t)|| <= iota_alpha B(beta, 1-alpha) ||A^{-alpha}F|| t^{beta-alpha} + iota_0 ||xi||
/// at every node, plus regularity and continuity records for A^alpha X and A^{1-alpha} X.
VerificationReport verify_theorem1(const SpectralOperator& op, const SpectralVector& xi,
                                   const ForcingSpec& forcing, const GradedMesh& mesh,
                                   const Theorem1Options& options = {});

/// Node-wise ratio of ||X(t)|| to the deterministic growth bound; 0/0 counts as 0.
std::vector<double> theorem1_ratios(const Trajectory& solution, double xi_norm,
                                    double forcing_norm, double alpha, double beta);

}  // namespace evoreg
