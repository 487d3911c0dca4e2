#include "evoreg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace evoreg {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": size mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
    }
}

void require_finite(const SpectralVector& x, const char* what) {
    if (!x.all_finite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
    }
}

// FFTW planning is not thread-safe; execution on plan-owned buffers is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

class R2RPlan {
public:
    R2RPlan(std::size_t n, fftw_r2r_kind kind)
        : n_(n), in_(fftw_alloc_real(n)), out_(fftw_alloc_real(n)) {
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_r2r_1d(static_cast<int>(n), in_, out_, kind, FFTW_ESTIMATE);
    }
    ~R2RPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    R2RPlan(const R2RPlan&) = delete;
    R2RPlan& operator=(const R2RPlan&) = delete;

    std::span<double> input() { return {in_, n_}; }
    std::span<const double> output() const { return {out_, n_}; }
    void execute() { fftw_execute(plan_); }

private:
    std::size_t n_;
    double* in_;
    double* out_;
    fftw_plan plan_{};
};

}  // namespace

// ---- SpectralVector --------------------------------------------------------

SpectralVector SpectralVector::unit(std::size_t n_modes, std::size_t mode, double scale) {
    if (mode >= n_modes) {
        throw std::invalid_argument("SpectralVector::unit: mode index out of range");
    }
    SpectralVector v(n_modes);
    v[mode] = scale;
    return v;
}

double SpectralVector::norm() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
}

bool SpectralVector::all_finite() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); });
}

SpectralVector SpectralVector::resized(std::size_t n) const {
    std::vector<double> c(n, 0.0);
    std::copy_n(coeffs_.begin(), std::min(n, coeffs_.size()), c.begin());
    return SpectralVector(std::move(c));
}

SpectralVector& SpectralVector::operator+=(const SpectralVector& other) {
    require_same_size(size(), other.size(), "SpectralVector +=");
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += other.coeffs_[n];
    return *this;
}

SpectralVector& SpectralVector::operator-=(const SpectralVector& other) {
    require_same_size(size(), other.size(), "SpectralVector -=");
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= other.coeffs_[n];
    return *this;
}

SpectralVector& SpectralVector::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

double distance(const SpectralVector& a, const SpectralVector& b) {
    require_same_size(a.size(), b.size(), "distance");
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double d = a[n] - b[n];
        s += d * d;
    }
    return std::sqrt(s);
}

double DiagonalHS::hs_norm() const {
    double s = 0.0;
    for (double g : g_) s += g * g;
    return std::sqrt(s);
}

// ---- SpectralOperator ------------------------------------------------------

SpectralOperator::SpectralOperator(std::vector<double> eigenvalues, double length)
    : eigenvalues_(std::move(eigenvalues)), length_(length) {
    if (!(length_ > 0.0) || !std::isfinite(length_)) {
        throw std::invalid_argument("SpectralOperator: interval length must be positive");
    }
    if (eigenvalues_.empty()) {
        throw std::invalid_argument("SpectralOperator: at least one mode is required");
    }
    for (std::size_t n = 0; n < eigenvalues_.size(); ++n) {
        const double lam = eigenvalues_[n];
        if (!std::isfinite(lam) || !(lam > 0.0)) {
            throw std::invalid_argument("SpectralOperator: eigenvalue " + std::to_string(n) +
                                        " is not strictly positive");
        }
        if (n > 0 && lam < eigenvalues_[n - 1]) {
            throw std::invalid_argument("SpectralOperator: eigenvalues must be nondecreasing");
        }
    }
}

SpectralOperator build_cable_operator(double length, std::size_t n_modes) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("build_cable_operator: L must be positive");
    }
    if (n_modes == 0) {
        throw std::invalid_argument("build_cable_operator: N must be at least 1");
    }
    std::vector<double> lam(n_modes);
    for (std::size_t n = 0; n < n_modes; ++n) {
        const double k = static_cast<double>(n) * std::numbers::pi / length;
        lam[n] = 1.0 + k * k;
    }
    return SpectralOperator(std::move(lam), length);
}

SpectralVector semigroup_apply(const SpectralOperator& op, double t, const SpectralVector& x) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("semigroup_apply: t must be finite and >= 0");
    }
    require_same_size(op.size(), x.size(), "semigroup_apply");
    require_finite(x, "semigroup_apply");
    SpectralVector y = x;
    if (t == 0.0) return y;
    for (std::size_t n = 0; n < y.size(); ++n) y[n] *= std::exp(-op.eigenvalue(n) * t);
    return y;
}

SpectralVector fractional_power_apply(const SpectralOperator& op, double theta,
                                      const SpectralVector& x) {
    require_same_size(op.size(), x.size(), "fractional_power_apply");
    SpectralVector y = x;
    if (theta == 0.0) return y;
    for (std::size_t n = 0; n < y.size(); ++n) y[n] *= std::pow(op.eigenvalue(n), theta);
    return y;
}

SpectralVector smoothed_power_apply(const SpectralOperator& op, double theta, double t,
                                    const SpectralVector& x) {
    if (!(t >= 0.0)) throw std::invalid_argument("smoothed_power_apply: t must be >= 0");
    require_same_size(op.size(), x.size(), "smoothed_power_apply");
    SpectralVector y = x;
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double lam = op.eigenvalue(n);
        y[n] *= std::exp(theta * std::log(lam) - lam * t);
    }
    return y;
}

std::vector<std::complex<double>> resolvent_apply(const SpectralOperator& op,
                                                  std::complex<double> lambda,
                                                  const SpectralVector& x) {
    require_same_size(op.size(), x.size(), "resolvent_apply");
    std::vector<std::complex<double>> y(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        const std::complex<double> d = lambda - op.eigenvalue(n);
        if (d == 0.0) {
            throw std::invalid_argument("resolvent_apply: lambda is an eigenvalue");
        }
        y[n] = x[n] / d;
    }
    return y;
}

double operator_norm_semigroup(const SpectralOperator& op, double theta, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("operator_norm_semigroup: t must be > 0");
    }
    if (theta < 0.0) throw std::invalid_argument("operator_norm_semigroup: theta must be >= 0");
    double best = -std::numeric_limits<double>::infinity();
    for (double lam : op.eigenvalues()) {
        best = std::max(best, theta * std::log(lam) - lam * t);
    }
    return std::exp(best);
}

double smoothing_envelope(double theta) {
    if (theta < 0.0) throw std::invalid_argument("smoothing_envelope: theta must be >= 0");
    if (theta == 0.0) return 1.0;
    return std::pow(theta / std::numbers::e, theta);
}

SemigroupConstants semigroup_constants(const SpectralOperator& op, double theta) {
    if (theta < 0.0) throw std::invalid_argument("semigroup_constants: theta must be >= 0");
    SemigroupConstants c;
    c.theta = theta;
    c.iota_envelope = smoothing_envelope(theta);
    // Per mode, sup_t (t lam)^theta e^{-lam t} sits at t = theta/lam (t = 0 for theta = 0).
    double iota = 0.0;
    for (double lam : op.eigenvalues()) {
        const double t_star = theta / lam;
        const double v = theta == 0.0 ? 1.0
                                      : std::exp(theta * std::log(t_star * lam) - lam * t_star);
        iota = std::max(iota, v);
    }
    c.iota = iota;
    c.upsilon = std::pow(op.lambda_min(), -theta);
    return c;
}

double resolvent_ratio(const SpectralOperator& op, std::complex<double> lambda) {
    double dist = std::numeric_limits<double>::infinity();
    for (double lam : op.eigenvalues()) dist = std::min(dist, std::abs(lambda - lam));
    if (dist == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(lambda) / dist;
}

SemigroupConstants sector_bound(const SpectralOperator& op, double varpi, std::size_t samples) {
    if (!(varpi > 0.0) || !(varpi < std::numbers::pi / 2)) {
        throw std::invalid_argument("sector_bound: varpi must lie in (0, pi/2)");
    }
    if (samples == 0) throw std::invalid_argument("sector_bound: empty sample set");

    SemigroupConstants c = semigroup_constants(op, 0.0);
    c.sector_angle = varpi;

    const double lo = std::log(op.lambda_min() / 100.0);
    const double hi = std::log(100.0 * op.lambda_max());
    const double angles[] = {varpi, -varpi, std::numbers::pi};
    double m = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double frac = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        const double r = std::exp(lo + frac * (hi - lo));
        for (double a : angles) m = std::max(m, resolvent_ratio(op, std::polar(r, a)));
    }
    c.sector_bound = m;
    return c;
}

// ---- grid <-> coefficient transform ----------------------------------------

std::vector<double> grid_points(double length, std::size_t n_points) {
    std::vector<double> x(n_points);
    for (std::size_t j = 0; j < n_points; ++j) {
        x[j] = (static_cast<double>(j) + 0.5) * length / static_cast<double>(n_points);
    }
    return x;
}

double basis_function(double length, std::size_t n, double x) {
    if (n == 0) return 1.0 / std::sqrt(length);
    return std::sqrt(2.0 / length) * std::cos(static_cast<double>(n) * std::numbers::pi * x / length);
}

SpectralVector analyze(double length, std::span<const double> grid_values, std::size_t n_modes) {
    const std::size_t m = grid_values.size();
    if (m < n_modes || m == 0) {
        throw std::invalid_argument("analyze: need at least as many grid points as modes");
    }
    // DCT-II: Y_k = 2 sum_j f_j cos(pi k (j + 1/2) / M).
    R2RPlan plan(m, FFTW_REDFT10);
    std::copy(grid_values.begin(), grid_values.end(), plan.input().begin());
    plan.execute();
    const auto y = plan.output();
    const double dx = length / static_cast<double>(m);
    SpectralVector c(n_modes);
    for (std::size_t n = 0; n < n_modes; ++n) {
        const double scale = n == 0 ? 1.0 / std::sqrt(length) : std::sqrt(2.0 / length);
        c[n] = dx * scale * 0.5 * y[n];
    }
    return c;
}

std::vector<double> synthesize(double length, const SpectralVector& x, std::size_t n_points) {
    if (n_points < x.size() || n_points == 0) {
        throw std::invalid_argument("synthesize: need at least as many grid points as modes");
    }
    // DCT-III: f_j = X_0 + 2 sum_{k>=1} X_k cos(pi k (j + 1/2) / M).
    R2RPlan plan(n_points, FFTW_REDFT01);
    auto in = plan.input();
    std::fill(in.begin(), in.end(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        in[n] = n == 0 ? x[0] / std::sqrt(length) : 0.5 * std::sqrt(2.0 / length) * x[n];
    }
    plan.execute();
    const auto out = plan.output();
    return {out.begin(), out.end()};
}

}  // namespace evoreg
