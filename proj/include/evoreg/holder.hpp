#pragma once

#include "evoreg/spectral.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evoreg {

/// A function (0, T] -> H sampled on a strictly increasing time grid. A node
/// at t = 0 is allowed and then must carry a finite value.
struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralVector> values;
    double horizon = 0.0;

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }

    /// Throws std::invalid_argument on unsorted times, size mismatches or
    /// non-finite values.
    void validate() const;

    /// Node-wise norms ||f(t_k)||.
    std::vector<double> norms() const;

    /// Nodes with t in [t_lo, t_hi].
    Trajectory window(double t_lo, double t_hi) const;
};

/// Sample a closed-form function on the given nodes.
Trajectory sample_function(const std::function<SpectralVector(double)>& f,
                           std::vector<double> times, double horizon);

/// Discrete components of the weighted Holder norm
///   sup_t t^{1-beta} ||f(t)|| + sup_{s<t} s^{1-beta+sigma} ||f(t)-f(s)|| / (t-s)^sigma.
struct HolderReport {
    double beta = 0.0;
    double sigma = 0.0;
    double sup_term = 0.0;
    double holder_term = 0.0;
    double norm = 0.0;  // sup_term + holder_term
    /// w_f(t_k) = max_{j<k} of the weighted quotient (0 at the first node).
    std::vector<double> modulus;
    /// Running maximum of `modulus`; nondecreasing, ends at holder_term.
    std::vector<double> modulus_envelope;
    /// lim_{t->0} t^{1-beta} f(t), linearly extrapolated from the two smallest positive nodes.
    SpectralVector limit_at_zero;
    bool limit_exists = false;
    /// Fewer than two nodes: holder_term is 0 by convention.
    bool degenerate = false;
};

struct HolderOptions {
    /// Accept sigma = 0 (the gamma = 0 end of the regularity scale).
    bool allow_zero_sigma = false;
};

/// Requires 0 < sigma < beta <= 1 (or 0 <= sigma with allow_zero_sigma).
HolderReport weighted_holder_norm(const Trajectory& traj, double beta, double sigma,
                                  HolderOptions options = {});

struct HolderExponents {
    double beta;
    double sigma;
};

/// Several (beta, sigma) pairs in one sweep over the node pairs.
std::vector<HolderReport> weighted_holder_norms(const Trajectory& traj,
                                                const std::vector<HolderExponents>& exponents,
                                                HolderOptions options = {});

/// Limit test at t = 0: oscillations of t^{1-beta} f over the first kLimitWindows dyadic
/// node windows must shrink toward 0, or all stay below kLimitAgreementTol times the scale.
inline constexpr double kLimitAgreementTol = 1e-3;
inline constexpr std::size_t kLimitWindows = 6;

struct BoundCheck {
    std::string name;
    bool passed = true;
    double worst_ratio = 0.0;  // max of lhs / rhs over the checked nodes or pairs
};

/// Verifies ||f(t)|| <= N t^{beta-1}, ||f(t)-f(s)|| <= w_f(t)(t-s)^sigma s^{beta-sigma-1}
/// and w_f(t) <= N for the norm N carried by `report`.
std::vector<BoundCheck> pointwise_bounds_check(const Trajectory& traj, const HolderReport& report);

enum class MemberShape { power, cusp, sine };

MemberShape parse_member_shape(std::string_view name);
std::string_view to_string(MemberShape shape);

/// f(t) = t^{beta-1} g(t) v with g in C^sigma([0,T]) and g(0) = 0, which is a
/// certified element of the weighted space:
///   power: g(t) = t^sigma        (t^{2 sigma} when beta - 1 + sigma = 0)
///   cusp:  g(t) = |t - T/2|^sigma - (T/2)^sigma
///   sine:  g(t) = sin(pi t / T)^sigma
class MemberFunction {
public:
    MemberFunction(double beta, double sigma, MemberShape shape, SpectralVector direction,
                   double horizon);

    SpectralVector operator()(double t) const;
    double scalar_profile(double t) const;  // t^{beta-1} g(t)

    /// lim_{t->0} t^{1-beta} f(t) = g(0) v = 0.
    SpectralVector limit_at_zero() const { return SpectralVector(direction_.size()); }

    double beta() const noexcept { return beta_; }
    double sigma() const noexcept { return sigma_; }
    double horizon() const noexcept { return horizon_; }
    MemberShape shape() const noexcept { return shape_; }
    const SpectralVector& direction() const noexcept { return direction_; }
    double power_exponent() const noexcept { return g_exponent_; }
    /// The plain power profile would have been constant and was replaced.
    bool degenerate_replaced() const noexcept { return replaced_; }

private:
    double beta_;
    double sigma_;
    MemberShape shape_;
    SpectralVector direction_;
    double horizon_;
    double g_exponent_;
    bool replaced_ = false;
};

MemberFunction make_member(double beta, double sigma, std::string_view shape,
                           SpectralVector direction, double horizon);

/// T^{gamma-beta}: ||f||_{beta,sigma} <= T^{gamma-beta} ||f||_{gamma,sigma} for sigma < beta < gamma <= 1.
double embedding_factor(double beta, double gamma, double sigma, double horizon);

}  // namespace evoreg
