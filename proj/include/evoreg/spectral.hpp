#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace evoreg {

/// Element of H = L2([0,L]) stored by its coefficients in the operator's
/// orthonormal eigenbasis.
class SpectralVector {
public:
    SpectralVector() = default;
    explicit SpectralVector(std::size_t n) : coeffs_(n, 0.0) {}
    explicit SpectralVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}
    SpectralVector(std::initializer_list<double> coeffs) : coeffs_(coeffs) {}

    /// Unit vector e_n in an N-mode basis.
    static SpectralVector unit(std::size_t n_modes, std::size_t mode, double scale = 1.0);

    std::size_t size() const noexcept { return coeffs_.size(); }
    double operator[](std::size_t n) const { return coeffs_[n]; }
    double& operator[](std::size_t n) { return coeffs_[n]; }

    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::span<double> coeffs() noexcept { return coeffs_; }

    /// Parseval norm sqrt(sum c_n^2).
    double norm() const;
    bool all_finite() const;

    /// Zero-padded or truncated copy with n modes.
    SpectralVector resized(std::size_t n) const;

    SpectralVector& operator+=(const SpectralVector& other);
    SpectralVector& operator-=(const SpectralVector& other);
    SpectralVector& operator*=(double s);

    friend SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
    friend SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
    friend SpectralVector operator*(double s, SpectralVector a) { return a *= s; }
    friend SpectralVector operator*(SpectralVector a, double s) { return a *= s; }
    friend bool operator==(const SpectralVector&, const SpectralVector&) = default;

private:
    std::vector<double> coeffs_;
};

/// Distance ||a - b|| without materialising the difference.
double distance(const SpectralVector& a, const SpectralVector& b);

/// Diagonal Hilbert-Schmidt operator U -> H acting mode-wise by g_n.
class DiagonalHS {
public:
    DiagonalHS() = default;
    explicit DiagonalHS(std::vector<double> multipliers) : g_(std::move(multipliers)) {}

    std::size_t size() const noexcept { return g_.size(); }
    double operator[](std::size_t n) const { return g_[n]; }
    std::span<const double> multipliers() const noexcept { return g_; }

    /// ||G||_{L2(U;H)} = sqrt(sum g_n^2).
    double hs_norm() const;

    /// The multipliers as an element of l2, which is how L2(U;H) is coordinatised here.
    SpectralVector as_vector() const { return SpectralVector(g_); }

private:
    std::vector<double> g_;
};

/// Positive self-adjoint operator with known eigenpairs in a Neumann cosine
/// basis on [0, L]. Eigenvalues are strictly positive and nondecreasing.
class SpectralOperator {
public:
    /// Throws std::invalid_argument unless eigenvalues are finite, positive
    /// and nondecreasing, and length > 0.
    SpectralOperator(std::vector<double> eigenvalues, double length);

    std::size_t size() const noexcept { return eigenvalues_.size(); }
    double eigenvalue(std::size_t n) const { return eigenvalues_[n]; }
    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    double lambda_min() const noexcept { return eigenvalues_.front(); }
    double lambda_max() const noexcept { return eigenvalues_.back(); }
    double length() const noexcept { return length_; }

private:
    std::vector<double> eigenvalues_;
    double length_;
};

/// -d^2/dx^2 + I on [0, L] with Neumann ends: lambda_n = 1 + (n pi / L)^2.
SpectralOperator build_cable_operator(double length, std::size_t n_modes);

/// S(t)x = e^{-tA}x.
SpectralVector semigroup_apply(const SpectralOperator& op, double t, const SpectralVector& x);

/// A^theta x for any real theta (negative powers are bounded since lambda_min > 0).
SpectralVector fractional_power_apply(const SpectralOperator& op, double theta,
                                      const SpectralVector& x);

/// A^theta S(t) x in one pass.
SpectralVector smoothed_power_apply(const SpectralOperator& op, double theta, double t,
                                    const SpectralVector& x);

/// (lambda - A)^{-1} x. Throws if lambda hits the spectrum.
std::vector<std::complex<double>> resolvent_apply(const SpectralOperator& op,
                                                  std::complex<double> lambda,
                                                  const SpectralVector& x);

/// Exact ||A^theta S(t)|| = max_n lambda_n^theta e^{-lambda_n t}, t > 0.
double operator_norm_semigroup(const SpectralOperator& op, double theta, double t);

/// sup_{t>0} t^theta ||A^theta S(t)|| over an unbounded positive spectrum: (theta/e)^theta.
double smoothing_envelope(double theta);

struct SemigroupConstants {
    double theta = 0.0;
    double iota = 1.0;           // max_n sup_t (t lambda_n)^theta e^{-lambda_n t}
    double iota_envelope = 1.0;  // (theta/e)^theta
    double upsilon = 1.0;        // lambda_min^{-theta}
    double sector_angle = 0.0;   // varpi, set by sector_bound
    double sector_bound = 0.0;   // empirical M_varpi, set by sector_bound
};

SemigroupConstants semigroup_constants(const SpectralOperator& op, double theta);

/// |lambda| * ||(lambda - A)^{-1}|| = |lambda| / dist(lambda, sigma(A)).
double resolvent_ratio(const SpectralOperator& op, std::complex<double> lambda);

/// Empirical M_varpi: sup of resolvent_ratio over `samples` log-spaced moduli in
/// [lambda_min/100, 100 lambda_max] on each of the rays arg = +varpi, -varpi, pi.
SemigroupConstants sector_bound(const SpectralOperator& op, double varpi, std::size_t samples);

/// Cell-centred grid x_j = (j + 1/2) L / M on which the cosine transform is orthogonal.
std::vector<double> grid_points(double length, std::size_t n_points);

/// Basis function e_n(x): 1/sqrt(L) for n = 0, sqrt(2/L) cos(n pi x / L) otherwise.
double basis_function(double length, std::size_t n, double x);

/// Coefficients of the first n_modes basis functions from values on grid_points(L, M).
/// Exact (to rounding) for inputs band-limited below M. Requires M >= n_modes.
SpectralVector analyze(double length, std::span<const double> grid_values, std::size_t n_modes);

/// Values of sum_n c_n e_n(x_j) on grid_points(L, M). Requires M >= x.size().
std::vector<double> synthesize(double length, const SpectralVector& x, std::size_t n_points);

}  // namespace evoreg
