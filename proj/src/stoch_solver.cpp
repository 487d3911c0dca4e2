#include "evoreg/stoch_solver.hpp"

#include "evoreg/parallel.hpp"
#include "evoreg/rng.hpp"
#include "evoreg/special.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace evoreg {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// phi1(2z) - phi1(z)^2, the part of the step variance not explained by dW.
double ou_residual_variance(double z) {
    static const std::array<double, 32> coef = [] {
        std::array<double, 32> c{};
        std::array<double, 34> inv_fact{};
        inv_fact[0] = 1.0;
        for (std::size_t i = 1; i < inv_fact.size(); ++i) inv_fact[i] = inv_fact[i - 1] / double(i);
        for (std::size_t j = 0; j < c.size(); ++j) {
            double cross = 0.0;
            for (std::size_t i = 0; i <= j; ++i) cross += inv_fact[i + 1] * inv_fact[j - i + 1];
            c[j] = std::ldexp(1.0, static_cast<int>(j)) * inv_fact[j + 1] - cross;
        }
        return c;
    }();
    if (z < 0.5) {
        double sum = 0.0;
        double zp = z * z;
        for (std::size_t j = 2; j < coef.size(); ++j) {
            const double term = (j % 2 == 0 ? 1.0 : -1.0) * coef[j] * zp;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            zp *= z;
        }
        return std::max(0.0, sum);
    }
    const double p1 = phi_kernels(z).phi1;
    return std::max(0.0, phi_kernels(2.0 * z).phi1 - p1 * p1);
}

// Per-(step, mode) coefficients: X' = decay X + a Z1 + b Z2, dW = sqrt_h Z1.
struct StepTable {
    std::size_t steps = 0;
    std::size_t modes = 0;
    std::vector<double> decay, a, b, sqrt_h;
    std::vector<SpectralVector> multipliers;

    std::size_t at(std::size_t k, std::size_t n) const { return k * modes + n; }
};

StepTable build_step_table(const SpectralOperator& op, const NoiseSpec& noise,
                           const GradedMesh& mesh) {
    StepTable tab;
    tab.steps = mesh.steps();
    tab.modes = op.size();
    const std::size_t total = tab.steps * tab.modes;
    tab.decay.resize(total);
    tab.a.resize(total);
    tab.b.resize(total);
    tab.sqrt_h.resize(total);
    tab.multipliers.reserve(tab.steps);
    const auto& t = mesh.nodes();
    for (std::size_t k = 0; k < tab.steps; ++k) {
        const double h = t[k + 1] - t[k];
        const double mid = 0.5 * (t[k] + t[k + 1]);
        const DiagonalHS g = noise.multipliers(mid);
        if (g.size() != tab.modes)
            throw std::invalid_argument("noise multipliers have the wrong mode count");
        for (std::size_t n = 0; n < tab.modes; ++n) {
            if (!std::isfinite(g[n])) {
                std::ostringstream os;
                os << "noise multiplier g_" << n << " is not finite at midpoint " << mid
                   << " of step " << k;
                throw std::invalid_argument(os.str());
            }
        }
        tab.multipliers.push_back(g.as_vector());
        const double sh = std::sqrt(h);
        for (std::size_t n = 0; n < tab.modes; ++n) {
            const double z = op.eigenvalue(n) * h;
            const auto phi = phi_kernels(z);
            const std::size_t i = tab.at(k, n);
            tab.decay[i] = phi.phi0;
            tab.a[i] = g[n] * sh * phi.phi1;
            tab.b[i] = g[n] * sh * std::sqrt(ou_residual_variance(z));
            tab.sqrt_h[i] = sh;
        }
    }
    return tab;
}

void require_gate(const NoiseSpec& noise) {
    if (noise.walsh) return;
    if (auto g = noise.gate(); !g) throw GateViolation(g);
}

Trajectory semigroup_path(const SpectralOperator& op, const SpectralVector& xi,
                          const GradedMesh& mesh) {
    Trajectory out;
    out.horizon = mesh.horizon();
    out.times = mesh.nodes();
    for (double t : out.times) out.values.push_back(semigroup_apply(op, t, xi));
    return out;
}

}  // namespace

GateResult NoiseSpec::gate() const {
    if (walsh) {
        GateResult g;
        g.fail("walsh-white noise is cylindrical, not Hilbert-Schmidt: (H4) G in F^(beta,sigma)((0,T];L2(U;H)) fails");
        return g;
    }
    return validate_H4(beta, sigma);
}

NoiseSpec constant_noise(std::size_t n_modes, double value, double beta, double sigma) {
    NoiseSpec s;
    s.multipliers = [n_modes, value](double) { return DiagonalHS(std::vector<double>(n_modes, value)); };
    s.beta = beta;
    s.sigma = sigma;
    s.name = "constant";
    s.constant_in_time = true;
    return s;
}

NoiseSpec smooth_decay_noise(const SpectralOperator& op, double beta, double sigma) {
    std::vector<double> inv(op.size());
    for (std::size_t n = 0; n < op.size(); ++n) inv[n] = 1.0 / op.eigenvalue(n);
    NoiseSpec s;
    s.multipliers = [inv, beta](double t) {
        std::vector<double> g(inv);
        const double w = std::pow(t, beta - 1.0);
        for (double& x : g) x *= w;
        return DiagonalHS(std::move(g));
    };
    s.beta = beta;
    s.sigma = sigma;
    s.name = "smooth-decay";
    s.power_in_time = beta - 1.0;
    if (beta == 1.0) s.constant_in_time = true;
    return s;
}

NoiseSpec inverse_eigen_noise(const SpectralOperator& op, double beta, double sigma) {
    std::vector<double> inv(op.size());
    for (std::size_t n = 0; n < op.size(); ++n) inv[n] = 1.0 / op.eigenvalue(n);
    NoiseSpec s;
    s.multipliers = [inv](double) { return DiagonalHS(inv); };
    s.beta = beta;
    s.sigma = sigma;
    s.name = "inverse-eigen";
    s.constant_in_time = true;
    return s;
}

NoiseSpec walsh_white_noise(std::size_t n_modes) {
    NoiseSpec s = constant_noise(n_modes, 1.0, 1.0, 0.25);
    s.name = "walsh-white";
    s.walsh = true;
    return s;
}

Trajectory sample_noise_multipliers(const NoiseSpec& noise, const GradedMesh& mesh) {
    std::vector<double> times(mesh.nodes().begin() + 1, mesh.nodes().end());
    return sample_function([&](double s) { return noise.multipliers(s).as_vector(); },
                           std::move(times), mesh.horizon());
}

SampledPath sample_stochastic_convolution(const SpectralOperator& op, const NoiseSpec& noise,
                                          const GradedMesh& mesh, std::uint64_t seed,
                                          std::uint32_t replica, SamplerOptions options) {
    require_gate(noise);
    const StepTable tab = build_step_table(op, noise, mesh);
    const std::size_t K = tab.steps;
    const std::size_t N = tab.modes;

    SampledPath out;
    out.path.horizon = mesh.horizon();
    out.path.times = mesh.nodes();
    out.path.values.assign(K + 1, SpectralVector(N));
    if (options.record_increments) {
        out.increments.assign(K, SpectralVector(N));
        out.multipliers = tab.multipliers;
    }
    for (std::size_t n = 0; n < N; ++n) {
        const GaussianStream stream(seed, replica, static_cast<std::uint32_t>(n));
        double x = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const auto [z1, z2] = stream.draw_pair(k);
            const std::size_t i = tab.at(k, n);
            x = tab.decay[i] * x + tab.a[i] * z1 + tab.b[i] * z2;
            out.path.values[k + 1][n] = x;
            if (options.record_increments) out.increments[k][n] = tab.sqrt_h[i] * z1;
        }
    }
    return out;
}

double ito_isometry_oracle(const SpectralOperator& op, const NoiseSpec& noise, double t,
                           double theta) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("ito_isometry_oracle: t must be >= 0");
    if (t == 0.0) return 0.0;
    const std::size_t N = op.size();
    const DiagonalHS g_t = noise.multipliers(t);
    if (g_t.size() != N) throw std::invalid_argument("noise multipliers have the wrong mode count");

    double total = 0.0;
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (std::size_t n = 0; n < N; ++n) {
        const double lambda = op.eigenvalue(n);
        double value = 0.0;
        if (noise.constant_in_time) {
            value = g_t[n] * g_t[n] * t * phi_kernels(2.0 * lambda * t).phi1;
        } else if (noise.power_in_time) {
            const double p2 = 2.0 * *noise.power_in_time;
            if (!(p2 > -1.0)) {
                std::ostringstream os;
                os << "ito_isometry_oracle: integrand s^" << p2 << " diverges at 0 for mode " << n;
                throw std::domain_error(os.str());
            }
            const double a = g_t[n] / std::pow(t, *noise.power_in_time);
            value = a * a * std::pow(t, p2 + 1.0) * power_kernel(p2, 2.0 * lambda * t);
        } else {
            auto f = [&](double s) {
                const double g = noise.multipliers(s)[n];
                return std::exp(-2.0 * lambda * (t - s)) * g * g;
            };
            try {
                value = integrator.integrate(f, 0.0, t);
            } catch (const std::exception&) {
                value = NAN;
            }
        }
        if (!std::isfinite(value)) {
            std::ostringstream os;
            os << "ito_isometry_oracle: divergent integrand for mode " << n;
            throw std::domain_error(os.str());
        }
        total += std::pow(lambda, 2.0 * theta) * value;
    }
    return total;
}

namespace {

// Welford accumulator; combine() is Chan's parallel update.
struct Moments {
    double n = 0.0, mean = 0.0, m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    void combine(const Moments& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double total = n + o.n;
        const double d = o.mean - mean;
        mean += d * (o.n / total);
        m2 += o.m2 + d * d * (n * o.n / total);
        n = total;
    }
    MCEstimate estimate(std::uint64_t seed) const {
        MCEstimate e;
        e.mean = mean;
        e.replicas = static_cast<std::size_t>(n);
        e.seed = seed;
        e.std_error = n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
        return e;
    }
};

constexpr std::size_t kReplicaBlock = 64;

}  // namespace

MCMoments mc_expected_norms(const SpectralOperator& op, const NoiseSpec* noise,
                            const Trajectory* deterministic, const GradedMesh& mesh,
                            const MCOptions& options) {
    if (options.replicas < 100)
        throw std::invalid_argument("mc_expected_norms: at least 100 replicas required");
    if (noise) {
        require_gate(*noise);
        if (options.check_alpha1)
            if (auto g = validate_alpha1(options.alpha1, noise->sigma); !g) throw GateViolation(g);
    }
    if (!(options.alpha1 >= 0.0)) throw std::invalid_argument("mc_expected_norms: alpha1 must be >= 0");
    const std::size_t K = mesh.steps();
    const std::size_t N = op.size();
    if (deterministic && (deterministic->size() != K + 1 || deterministic->values[0].size() != N))
        throw std::invalid_argument("mc_expected_norms: deterministic path does not match the mesh");

    std::vector<double> lift(N);
    for (std::size_t n = 0; n < N; ++n) lift[n] = std::pow(op.eigenvalue(n), options.alpha1);

    StepTable tab;
    if (noise) tab = build_step_table(op, *noise, mesh);

    const std::size_t R = options.replicas;
    const std::size_t blocks = (R + kReplicaBlock - 1) / kReplicaBlock;
    // per block, per node: norm, norm^2, lifted norm
    std::vector<std::array<Moments, 3>> acc(blocks * (K + 1));

    auto run_block = [&](std::size_t b) {
        std::vector<double> x(N), w(N);
        auto* a = &acc[b * (K + 1)];
        const std::size_t r_end = std::min(R, (b + 1) * kReplicaBlock);
        for (std::size_t r = b * kReplicaBlock; r < r_end; ++r) {
            std::fill(w.begin(), w.end(), 0.0);
            for (std::size_t k = 0; k <= K; ++k) {
                if (k > 0 && noise) {
                    for (std::size_t n = 0; n < N; ++n) {
                        const GaussianStream stream(options.seed, static_cast<std::uint32_t>(r),
                                                    static_cast<std::uint32_t>(n));
                        const auto [z1, z2] = stream.draw_pair(k - 1);
                        const std::size_t i = tab.at(k - 1, n);
                        w[n] = tab.decay[i] * w[n] + tab.a[i] * z1 + tab.b[i] * z2;
                    }
                }
                double sq = 0.0, lsq = 0.0;
                for (std::size_t n = 0; n < N; ++n) {
                    const double v = (deterministic ? deterministic->values[k][n] : 0.0) + w[n];
                    sq += v * v;
                    lsq += lift[n] * lift[n] * v * v;
                }
                a[k][0].add(std::sqrt(sq));
                a[k][1].add(sq);
                a[k][2].add(std::sqrt(lsq));
            }
        }
    };
    const std::size_t workers = options.workers ? options.workers : worker_count();
    parallel_for(blocks, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) run_block(b);
    }, workers);

    MCMoments out;
    out.times = mesh.nodes();
    out.norm.resize(K + 1);
    out.norm_sq.resize(K + 1);
    out.lifted_norm.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        std::array<Moments, 3> total{};
        for (std::size_t b = 0; b < blocks; ++b)
            for (int q = 0; q < 3; ++q) total[q].combine(acc[b * (K + 1) + k][q]);
        out.norm[k] = total[0].estimate(options.seed);
        out.norm_sq[k] = total[1].estimate(options.seed);
        out.lifted_norm[k] = total[2].estimate(options.seed);
    }
    return out;
}

namespace {

double median(std::vector<double> v) {
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    const double hi = v[m];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    return 0.5 * (lo + hi);
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

HolderExponentEstimate estimate_holder_exponent(const std::vector<Trajectory>& paths,
                                                double epsilon, double horizon,
                                                std::uint64_t bootstrap_seed,
                                                std::size_t bootstrap_samples) {
    if (paths.size() < 10)
        throw std::invalid_argument("estimate_holder_exponent: at least 10 paths required");
    if (!(epsilon >= 0.0 && epsilon < horizon))
        throw std::invalid_argument("estimate_holder_exponent: need 0 <= epsilon < T");

    const double slack = 1e-12 * horizon;
    std::vector<Trajectory> win;
    win.reserve(paths.size());
    for (const auto& p : paths) win.push_back(p.window(epsilon - slack, horizon + slack));
    const std::size_t n = win.front().size();
    if (n < 16) throw std::invalid_argument("estimate_holder_exponent: fewer than 16 nodes in [epsilon, T]");
    for (const auto& w : win)
        if (w.size() != n || w.times != win.front().times)
            throw std::invalid_argument("estimate_holder_exponent: paths use different time grids");
    const auto& t = win.front().times;
    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * dt)
            throw std::invalid_argument("estimate_holder_exponent: nodes in [epsilon, T] are not uniformly spaced");

    std::vector<std::size_t> lags;
    for (std::size_t l = 1; 8 * l <= n - 1; l *= 2) lags.push_back(l);
    if (lags.size() < 3) {
        lags.clear();
        for (std::size_t l = 1; 2 * l <= n - 1; l *= 2) lags.push_back(l);
    }
    if (lags.size() < 3)
        throw std::invalid_argument("estimate_holder_exponent: fewer than 3 dyadic lags");

    const std::size_t P = win.size();
    const std::size_t L = lags.size();
    std::vector<double> stat(P * L);  // per path, per lag: max increment
    for (std::size_t p = 0; p < P; ++p) {
        for (std::size_t j = 0; j < L; ++j) {
            double best = 0.0;
            for (std::size_t i = 0; i + lags[j] < n; ++i)
                best = std::max(best, distance(win[p].values[i + lags[j]], win[p].values[i]));
            stat[p * L + j] = best;
        }
    }

    std::vector<double> log_lag(L);
    for (std::size_t j = 0; j < L; ++j) log_lag[j] = std::log(static_cast<double>(lags[j]) * dt);

    auto fit = [&](const std::vector<std::size_t>& pick, std::vector<double>* med_out) {
        std::vector<double> y(L);
        for (std::size_t j = 0; j < L; ++j) {
            std::vector<double> col(pick.size());
            for (std::size_t i = 0; i < pick.size(); ++i) col[i] = stat[pick[i] * L + j];
            const double m = median(std::move(col));
            if (!(m > 0.0))
                throw std::invalid_argument("estimate_holder_exponent: increments vanish at some lag");
            y[j] = std::log(m);
            if (med_out) med_out->push_back(m);
        }
        return ols_slope(log_lag, y);
    };

    HolderExponentEstimate est;
    for (std::size_t j = 0; j < L; ++j) est.lags.push_back(static_cast<double>(lags[j]) * dt);
    if (std::all_of(stat.begin(), stat.end(), [](double v) { return v == 0.0; })) {
        // Constant paths are Holder of every order.
        est.exponent = est.band_lo = est.band_hi = INFINITY;
        est.statistic.assign(L, 0.0);
        return est;
    }
    std::vector<std::size_t> all(P);
    for (std::size_t p = 0; p < P; ++p) all[p] = p;
    est.exponent = fit(all, &est.statistic);

    std::vector<double> boot;
    boot.reserve(bootstrap_samples);
    for (std::size_t b = 0; b < bootstrap_samples; ++b) {
        std::vector<std::size_t> pick(P);
        for (std::size_t i = 0; i < P; ++i) {
            const Philox4x32::Counter ctr{static_cast<std::uint32_t>(i), 0u,
                                          static_cast<std::uint32_t>(b), 0xB0075u};
            const auto out = Philox4x32::block(ctr, {static_cast<std::uint32_t>(bootstrap_seed),
                                                     static_cast<std::uint32_t>(bootstrap_seed >> 32)});
            pick[i] = std::min(P - 1, static_cast<std::size_t>(uniform_open_closed(out[0], out[1]) *
                                                               static_cast<double>(P)));
        }
        boot.push_back(fit(pick, nullptr));
    }
    if (boot.empty()) {
        est.band_lo = est.band_hi = est.exponent;
    } else {
        std::sort(boot.begin(), boot.end());
        const auto q = [&](double p) {
            const double pos = p * static_cast<double>(boot.size() - 1);
            const std::size_t i = static_cast<std::size_t>(pos);
            const double f = pos - static_cast<double>(i);
            return i + 1 < boot.size() ? boot[i] * (1.0 - f) + boot[i + 1] * f : boot[i];
        };
        est.band_lo = q(0.05);
        est.band_hi = q(0.95);
    }
    return est;
}

std::vector<double> weak_residual(const SpectralOperator& op, const SampledPath& sample,
                                  const SpectralVector& xi, const ForcingSpec* forcing,
                                  std::size_t mode, WeakResidualOptions options) {
    const auto& path = sample.path;
    if (path.size() < 2) throw std::invalid_argument("weak_residual: path needs at least two nodes");
    const std::size_t K = path.size() - 1;
    if (sample.increments.size() != K || sample.multipliers.size() != K)
        throw std::invalid_argument("weak_residual: mismatched increment record");
    if (mode >= op.size() || mode >= xi.size() || mode >= path.values[0].size())
        throw std::invalid_argument("weak_residual: mode index out of range");
    for (std::size_t k = 0; k < K; ++k)
        if (sample.increments[k].size() <= mode || sample.multipliers[k].size() <= mode)
            throw std::invalid_argument("weak_residual: mismatched increment record");

    const double lambda = options.lambda_override.value_or(op.eigenvalue(mode));
    const double lift = forcing ? std::pow(op.eigenvalue(mode), forcing->alpha) : 0.0;
    const auto& t = path.times;

    std::vector<double> out(K + 1);
    double drift = 0.0, noise = 0.0;
    out[0] = std::abs(path.values[0][mode] - xi[mode]);
    for (std::size_t k = 0; k < K; ++k) {
        const double h = t[k + 1] - t[k];
        const double xa = path.values[k][mode];
        const double xb = path.values[k + 1][mode];
        double f = 0.0;
        if (forcing) f = lift * forcing->reduced(0.5 * (t[k] + t[k + 1]))[mode];
        drift += h * f - lambda * h * 0.5 * (xa + xb);
        noise += sample.multipliers[k][mode] * sample.increments[k][mode];
        out[k + 1] = std::abs(xb - xi[mode] - drift - noise);
    }
    return out;
}

SampledPath coarsen(const SampledPath& sample, std::size_t factor, const NoiseSpec& noise) {
    const std::size_t K = sample.path.size() - 1;
    if (factor == 0 || K % factor != 0)
        throw std::invalid_argument("coarsen: step count is not divisible by the factor");
    if (sample.increments.size() != K)
        throw std::invalid_argument("coarsen: path carries no increment record");
    SampledPath out;
    out.path.horizon = sample.path.horizon;
    const std::size_t N = sample.path.values[0].size();
    for (std::size_t k = 0; k <= K; k += factor) {
        out.path.times.push_back(sample.path.times[k]);
        out.path.values.push_back(sample.path.values[k]);
    }
    for (std::size_t k = 0; k < K; k += factor) {
        SpectralVector dw(N);
        for (std::size_t j = k; j < k + factor; ++j) dw += sample.increments[j];
        out.increments.push_back(std::move(dw));
        const double mid = 0.5 * (sample.path.times[k] + sample.path.times[k + factor]);
        out.multipliers.push_back(noise.multipliers(mid).as_vector());
    }
    return out;
}

namespace {

struct StochRun {
    MCMoments moments;
    std::vector<double> ratios;
    double constant = 0.0;
    HolderReport moment_regularity;
    double modulus_ratio = 0.0;
    bool jensen = true;
    double noise_norm = 0.0;
};

struct StochProblem {
    const SpectralOperator& op;
    const NoiseSpec& noise;
    const ForcingSpec* forcing;
    const SpectralVector& xi;
    double lift;  // exponent of A in the moment regularity and path checks
};

Trajectory deterministic_part(const StochProblem& pb, const GradedMesh& mesh) {
    if (pb.forcing) return solve_mild_deterministic(pb.op, pb.xi, *pb.forcing, mesh).path;
    return semigroup_path(pb.op, pb.xi, mesh);
}

StochRun run_stochastic(const StochProblem& pb, const GradedMesh& mesh, std::size_t replicas,
                        const StochOptions& opt) {
    StochRun run;
    const Trajectory det = deterministic_part(pb, mesh);
    MCOptions mc;
    mc.replicas = replicas;
    mc.seed = opt.seed;
    mc.alpha1 = pb.lift;
    mc.workers = opt.workers;
    run.moments = mc_expected_norms(pb.op, &pb.noise, &det, mesh, mc);

    const double beta = pb.noise.beta;
    const double sigma = pb.noise.sigma;
    run.noise_norm = weighted_holder_norm(sample_noise_multipliers(pb.noise, mesh), beta, sigma).norm;
    double forcing_norm = 0.0;
    if (pb.forcing)
        forcing_norm = weighted_holder_norm(sample_reduced_forcing(*pb.forcing, mesh),
                                            pb.forcing->beta, pb.forcing->sigma)
                           .norm;
    const double xi_term = fractional_power_apply(pb.op, beta, pb.xi).norm();

    const auto& t = run.moments.times;
    run.ratios.assign(t.size(), 0.0);
    for (std::size_t k = 1; k < t.size(); ++k) {
        double den = xi_term + run.noise_norm * std::pow(t[k], beta - 0.5);
        if (pb.forcing) den += forcing_norm * std::pow(t[k], pb.forcing->beta - pb.forcing->alpha);
        const double num = run.moments.norm[k].mean;
        run.ratios[k] = den > 0.0 ? num / den : (num > 0.0 ? INFINITY : 0.0);
        run.constant = std::max(run.constant, run.ratios[k]);
        const double rms = std::sqrt(run.moments.norm_sq[k].mean);
        run.jensen = run.jensen && num <= rms * (1.0 + 1e-12);
    }

    Trajectory scalar;
    scalar.horizon = mesh.horizon();
    for (std::size_t k = 1; k < t.size(); ++k) {
        scalar.times.push_back(t[k]);
        scalar.values.push_back(SpectralVector{run.moments.lifted_norm[k].mean});
    }
    run.moment_regularity = weighted_holder_norm(scalar, beta, sigma);
    const auto& env = run.moment_regularity.modulus_envelope;
    const std::size_t k10 = std::max<std::size_t>(2, env.size() / 10);
    run.modulus_ratio = env[k10] > 0.0 ? env[1] / env[k10] : 0.0;
    return run;
}

HolderExponentEstimate path_regularity(const StochProblem& pb, const StochOptions& opt,
                                       double horizon) {
    const GradedMesh uniform(horizon, opt.path_steps, 1.0);
    const Trajectory det = deterministic_part(pb, uniform);
    std::vector<Trajectory> paths;
    paths.reserve(opt.path_count);
    for (std::size_t p = 0; p < opt.path_count; ++p) {
        SampledPath s = sample_stochastic_convolution(pb.op, pb.noise, uniform, opt.seed,
                                                      static_cast<std::uint32_t>(0x40000000u + p));
        for (std::size_t k = 0; k < s.path.size(); ++k) s.path.values[k] += det.values[k];
        paths.push_back(apply_power(pb.op, pb.lift, s.path));
    }
    return estimate_holder_exponent(paths, opt.epsilon, horizon);
}

VerificationReport verify_stochastic(const StochProblem& pb, const GradedMesh& mesh,
                                     const StochOptions& opt, const std::string& subcommand) {
    VerificationReport report;
    report.subcommand = subcommand;
    const double beta = pb.noise.beta;
    const double sigma = pb.noise.sigma;
    const std::string lift_name = pb.forcing ? "a" : "a1";

    const StochRun run = run_stochastic(pb, mesh, opt.replicas, opt);

    std::string den = "E||A^b xi||";
    if (pb.forcing) den += " + ||A^-a F|| t^(b-a)";
    den += " + ||G|| t^(b-1/2)";
    report.add_check("empirical_constant", "E||X(t)|| <= C [" + den + "]", run.constant, INFINITY,
                     std::isfinite(run.constant),
                     "C_hat = sup over nodes; ||G||_{b,s}=" + fmt(run.noise_norm));
    report.add_check("jensen", "E||X(t)|| <= (E||X(t)||^2)^(1/2)", run.jensen ? 1.0 : 0.0, 1.0,
                     run.jensen);
    report.add_check("moment_regularity", "E||A^" + lift_name + " X|| in F^(b,s)((0,T];R)",
                     run.moment_regularity.norm, INFINITY, std::isfinite(run.moment_regularity.norm),
                     "beta=" + fmt(beta) + " sigma=" + fmt(sigma));
    report.add_check("moment_modulus_to_zero", "w(t) -> 0 as t -> 0 for E||A^" + lift_name + " X||",
                     run.modulus_ratio, 0.1, run.modulus_ratio <= 0.1,
                     "envelope at the second node over envelope at the first tenth of nodes");

    const HolderExponentEstimate est = path_regularity(pb, opt, mesh.horizon());
    report.add_check("path_holder_exponent",
                     "A^" + lift_name + " X in C^g([eps,T];H) for g < s", est.exponent, opt.gamma,
                     est.exponent >= opt.gamma,
                     "bootstrap 90% band [" + fmt(est.band_lo) + ", " + fmt(est.band_hi) +
                         "] on [" + fmt(opt.epsilon) + ", " + fmt(mesh.horizon()) + "]");

    report.series.push_back({"constant_ratio", run.moments.times, run.ratios, INFINITY});
    std::vector<double> lifted(run.moments.times.size());
    for (std::size_t k = 0; k < lifted.size(); ++k) lifted[k] = run.moments.lifted_norm[k].mean;
    report.series.push_back({"lifted_moment", run.moments.times, lifted, INFINITY});

    if (opt.refine) {
        const double K = static_cast<double>(mesh.steps());
        const double R = static_cast<double>(opt.replicas);
        const StochRun fine_k = run_stochastic(pb, mesh.refined(2), opt.replicas, opt);
        report.add_refinement("empirical_constant", "K", K, 2 * K, run.constant, fine_k.constant,
                              opt.constant_stability);
        report.add_refinement("moment_regularity_norm", "K", K, 2 * K, run.moment_regularity.norm,
                              fine_k.moment_regularity.norm, opt.norm_stability);
        const StochRun more_r = run_stochastic(pb, mesh, opt.replicas * 10, opt);
        report.add_refinement("empirical_constant", "R", R, 10 * R, run.constant, more_r.constant,
                              opt.constant_stability);
        report.add_refinement("moment_regularity_norm", "R", R, 10 * R, run.moment_regularity.norm,
                              more_r.moment_regularity.norm, opt.norm_stability);
    }
    return report;
}

void check_common(const NoiseSpec& noise, const GradedMesh& mesh, const StochOptions& opt,
                  GateResult& g) {
    if (noise.walsh) {
        g.fail("walsh-white noise is excluded from theorem verification");
        return;
    }
    g.merge(noise.gate());
    const double sigma = noise.sigma;
    if (!(opt.gamma > 0.0 && opt.gamma < sigma))
        g.fail("0<gamma<sigma violated: gamma=" + fmt(opt.gamma) + ", sigma=" + fmt(sigma));
    if (!(opt.epsilon > 0.0 && opt.epsilon <= mesh.horizon()))
        g.fail("epsilon in (0,T] violated: epsilon=" + fmt(opt.epsilon));
    if (!(opt.nu > 0.0 && opt.nu < 0.5)) g.fail("0<nu<1/2 violated: nu=" + fmt(opt.nu));
}

}  // namespace

VerificationReport verify_theorem2(const SpectralOperator& op, const NoiseSpec& noise,
                                   const SpectralVector& xi, const GradedMesh& mesh,
                                   const StochOptions& options) {
    GateResult g;
    check_common(noise, mesh, options, g);
    if (!noise.walsh) g.merge(validate_alpha1(options.alpha1, noise.sigma));
    if (!g) throw GateViolation(g);
    if (options.replicas < 100) throw std::invalid_argument("verify_theorem2: at least 100 replicas required");
    const StochProblem pb{op, noise, nullptr, xi, options.alpha1};
    return verify_stochastic(pb, mesh, options, "verify-stoch");
}

VerificationReport verify_theorem3(const SpectralOperator& op, const NoiseSpec& noise,
                                   const ForcingSpec& forcing, const SpectralVector& xi,
                                   const GradedMesh& mesh, const StochOptions& options) {
    GateResult g;
    check_common(noise, mesh, options, g);
    if (forcing.beta != noise.beta || forcing.sigma != noise.sigma)
        g.fail("forcing and noise must share beta and sigma");
    g.merge(validate_joint(forcing.alpha, forcing.beta, forcing.sigma));
    if (!g) throw GateViolation(g);
    if (options.replicas < 100) throw std::invalid_argument("verify_theorem3: at least 100 replicas required");
    const StochProblem pb{op, noise, &forcing, xi, forcing.alpha};
    return verify_stochastic(pb, mesh, options, "verify-stoch");
}

}  // namespace evoreg
