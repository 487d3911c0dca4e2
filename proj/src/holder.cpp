#include "evoreg/holder.hpp"

#include "evoreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace evoreg {

void Trajectory::validate() const {
    if (times.size() != values.size())
        throw std::invalid_argument("Trajectory: times and values differ in length");
    if (!empty() && times.front() < 0.0)
        throw std::invalid_argument("Trajectory: negative time node");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k])) throw std::invalid_argument("Trajectory: non-finite time node");
        if (k > 0 && !(times[k] > times[k - 1]))
            throw std::invalid_argument("Trajectory: times must be strictly increasing");
        if (!values[k].all_finite())
            throw std::invalid_argument("Trajectory: non-finite value at node " + std::to_string(k));
        if (k > 0 && values[k].size() != values[0].size())
            throw std::invalid_argument("Trajectory: inconsistent mode counts");
    }
}

std::vector<double> Trajectory::norms() const {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](const SpectralVector& v) { return v.norm(); });
    return out;
}

Trajectory Trajectory::window(double t_lo, double t_hi) const {
    Trajectory out;
    out.horizon = horizon;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] >= t_lo && times[k] <= t_hi) {
            out.times.push_back(times[k]);
            out.values.push_back(values[k]);
        }
    }
    return out;
}

Trajectory sample_function(const std::function<SpectralVector(double)>& f,
                           std::vector<double> times, double horizon) {
    Trajectory traj;
    traj.horizon = horizon;
    traj.values.reserve(times.size());
    for (double t : times) traj.values.push_back(f(t));
    traj.times = std::move(times);
    traj.validate();
    return traj;
}

namespace {

double weight(double t, double exponent) {
    if (t == 0.0) return exponent > 0.0 ? 0.0 : 1.0;
    return std::pow(t, exponent);
}

// Extrapolate t^{1-beta} f(t) to t = 0 linearly from consecutive node pairs.
void estimate_limit(const Trajectory& traj, double beta, double scale, HolderReport& report) {
    std::vector<SpectralVector> g;
    std::vector<double> ts;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        if (t <= 0.0) continue;
        ts.push_back(t);
        g.push_back(std::pow(t, 1.0 - beta) * traj.values[k]);
    }
    if (g.empty()) return;
    if (g.size() < 2) {
        report.limit_at_zero = g.front();
        return;
    }
    const double c = ts[0] / (ts[1] - ts[0]);
    report.limit_at_zero = g[0] - c * (g[1] - g[0]);

    // Oscillation of t^{1-beta} f over the node windows [2^j, 2^{j+1}] next to t = 0.
    std::vector<double> osc;
    for (std::size_t lo = 1; 2 * lo <= g.size() && osc.size() < kLimitWindows; lo *= 2) {
        double o = 0.0;
        for (std::size_t a = lo - 1; a < 2 * lo; ++a)
            for (std::size_t b = a + 1; b < 2 * lo; ++b) o = std::max(o, distance(g[a], g[b]));
        osc.push_back(o);
    }
    const double ref = std::max(report.limit_at_zero.norm(), scale);
    const double tol = kLimitAgreementTol * ref;
    if (*std::max_element(osc.begin(), osc.end()) <= tol) {
        report.limit_exists = true;
        return;
    }
    if (osc.size() < 3) return;
    // Cauchy: the oscillation shrinks window by window toward t = 0.
    bool shrinking = true;
    for (std::size_t j = 0; j + 1 < osc.size(); ++j)
        shrinking = shrinking && osc[j] <= osc[j + 1] * (1.0 + 1e-9) + 1e-3 * tol;
    report.limit_exists = shrinking;
}

}  // namespace

std::vector<HolderReport> weighted_holder_norms(const Trajectory& traj,
                                                const std::vector<HolderExponents>& exponents,
                                                HolderOptions options) {
    for (const auto& e : exponents) {
        const bool sigma_ok = options.allow_zero_sigma ? e.sigma >= 0.0 : e.sigma > 0.0;
        if (!(sigma_ok && e.sigma < e.beta && e.beta <= 1.0))
            throw std::invalid_argument("weighted_holder_norm: requires 0 < sigma < beta <= 1");
    }
    if (traj.empty()) throw std::invalid_argument("weighted_holder_norm: empty trajectory");
    traj.validate();

    const std::size_t K = traj.size();
    const std::size_t E = exponents.size();
    const auto norms = traj.norms();

    // log-weights; -inf marks a zero weight (s = 0 with a positive exponent)
    std::vector<double> log_t(K);
    for (std::size_t j = 0; j < K; ++j)
        log_t[j] = traj.times[j] > 0.0 ? std::log(traj.times[j]) : -INFINITY;

    // modulus[e * K + k]
    std::vector<double> modulus(E * K, 0.0);
    parallel_for(K, [&](std::size_t k_begin, std::size_t k_end) {
        std::vector<double> best(E);
        for (std::size_t k = std::max<std::size_t>(k_begin, 1); k < k_end; ++k) {
            std::fill(best.begin(), best.end(), 0.0);
            for (std::size_t j = 0; j < k; ++j) {
                if (traj.times[j] <= 0.0) continue;
                const double d = distance(traj.values[k], traj.values[j]);
                if (d == 0.0) continue;
                const double log_d = std::log(d);
                const double log_dt = std::log(traj.times[k] - traj.times[j]);
                for (std::size_t e = 0; e < E; ++e) {
                    const double b = exponents[e].beta;
                    const double sg = exponents[e].sigma;
                    const double q = std::exp((1.0 - b + sg) * log_t[j] + log_d - sg * log_dt);
                    best[e] = std::max(best[e], q);
                }
            }
            for (std::size_t e = 0; e < E; ++e) modulus[e * K + k] = best[e];
        }
    });

    std::vector<HolderReport> out(E);
    for (std::size_t e = 0; e < E; ++e) {
        HolderReport& report = out[e];
        report.beta = exponents[e].beta;
        report.sigma = exponents[e].sigma;
        for (std::size_t k = 0; k < K; ++k)
            report.sup_term =
                std::max(report.sup_term, weight(traj.times[k], 1.0 - report.beta) * norms[k]);
        report.modulus.assign(modulus.begin() + static_cast<std::ptrdiff_t>(e * K),
                              modulus.begin() + static_cast<std::ptrdiff_t>((e + 1) * K));
        report.modulus_envelope.assign(K, 0.0);
        for (std::size_t k = 1; k < K; ++k)
            report.modulus_envelope[k] = std::max(report.modulus_envelope[k - 1], report.modulus[k]);
        report.degenerate = K < 2;
        report.holder_term = report.modulus_envelope.back();
        report.norm = report.sup_term + report.holder_term;
        report.limit_at_zero = SpectralVector(traj.values.front().size());
        estimate_limit(traj, report.beta, report.sup_term, report);
    }
    return out;
}

HolderReport weighted_holder_norm(const Trajectory& traj, double beta, double sigma,
                                  HolderOptions options) {
    return weighted_holder_norms(traj, {{beta, sigma}}, options).front();
}

std::vector<BoundCheck> pointwise_bounds_check(const Trajectory& traj, const HolderReport& report) {
    constexpr double slack = 1.0 + 1e-12;
    const double beta = report.beta;
    const double sigma = report.sigma;
    const auto norms = traj.norms();

    BoundCheck growth{"growth", true, 0.0};
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        if (t <= 0.0) continue;
        const double rhs = report.norm * std::pow(t, beta - 1.0);
        const double ratio = rhs > 0.0 ? norms[k] / rhs : (norms[k] > 0.0 ? INFINITY : 0.0);
        growth.worst_ratio = std::max(growth.worst_ratio, ratio);
    }
    growth.passed = growth.worst_ratio <= slack;

    BoundCheck increment{"increment", true, 0.0};
    for (std::size_t k = 1; k < traj.size(); ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            const double s = traj.times[j];
            if (s <= 0.0) continue;
            const double lhs = distance(traj.values[k], traj.values[j]);
            const double rhs = report.modulus[k] * std::pow(traj.times[k] - s, sigma) *
                               std::pow(s, beta - sigma - 1.0);
            const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
            increment.worst_ratio = std::max(increment.worst_ratio, ratio);
        }
    }
    increment.passed = increment.worst_ratio <= slack;

    BoundCheck modulus{"modulus", true, 0.0};
    for (double w : report.modulus) {
        const double ratio = report.norm > 0.0 ? w / report.norm : (w > 0.0 ? INFINITY : 0.0);
        modulus.worst_ratio = std::max(modulus.worst_ratio, ratio);
    }
    modulus.passed = modulus.worst_ratio <= slack;

    return {growth, increment, modulus};
}

MemberShape parse_member_shape(std::string_view name) {
    if (name == "power") return MemberShape::power;
    if (name == "cusp") return MemberShape::cusp;
    if (name == "sine") return MemberShape::sine;
    throw std::invalid_argument("unknown member shape '" + std::string(name) + "'");
}

std::string_view to_string(MemberShape shape) {
    switch (shape) {
        case MemberShape::power: return "power";
        case MemberShape::cusp: return "cusp";
        case MemberShape::sine: return "sine";
    }
    return "power";
}

MemberFunction::MemberFunction(double beta, double sigma, MemberShape shape,
                               SpectralVector direction, double horizon)
    : beta_(beta),
      sigma_(sigma),
      shape_(shape),
      direction_(std::move(direction)),
      horizon_(horizon),
      g_exponent_(sigma) {
    if (!(sigma > 0.0 && sigma < beta && beta <= 1.0))
        throw std::invalid_argument("make_member: requires 0 < sigma < beta <= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("make_member: horizon must be > 0");
    if (shape == MemberShape::power && std::abs(beta - 1.0 + sigma) < 1e-14) {
        g_exponent_ = 2.0 * sigma;
        replaced_ = true;
    }
}

double MemberFunction::scalar_profile(double t) const {
    if (t < 0.0 || t > horizon_ * (1.0 + 1e-12))
        throw std::invalid_argument("MemberFunction: t outside [0, T]");
    if (t == 0.0) return 0.0;
    double g = 0.0;
    switch (shape_) {
        case MemberShape::power:
            return std::pow(t, beta_ - 1.0 + g_exponent_);
        case MemberShape::cusp: {
            const double half = 0.5 * horizon_;
            g = std::pow(std::abs(t - half), sigma_) - std::pow(half, sigma_);
            break;
        }
        case MemberShape::sine:
            g = std::pow(std::max(0.0, std::sin(std::numbers::pi * t / horizon_)), sigma_);
            break;
    }
    return std::pow(t, beta_ - 1.0) * g;
}

SpectralVector MemberFunction::operator()(double t) const {
    return scalar_profile(t) * direction_;
}

MemberFunction make_member(double beta, double sigma, std::string_view shape,
                           SpectralVector direction, double horizon) {
    return MemberFunction(beta, sigma, parse_member_shape(shape), std::move(direction), horizon);
}

double embedding_factor(double beta, double gamma, double sigma, double horizon) {
    if (!(sigma < beta && beta < gamma && gamma <= 1.0))
        throw std::invalid_argument("embedding_factor: requires sigma < beta < gamma <= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("embedding_factor: horizon must be > 0");
    return std::pow(horizon, gamma - beta);
}

}  // namespace evoreg
