#include "evoreg/det_solver.hpp"

#include "evoreg/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace evoreg {

GradedMesh::GradedMesh(double horizon, std::size_t steps, double grading)
    : horizon_(horizon), steps_(steps), grading_(grading) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("GradedMesh: horizon must be > 0");
    if (steps < 1) throw std::invalid_argument("GradedMesh: need at least one step");
    if (!(grading >= 1.0) || !std::isfinite(grading))
        throw std::invalid_argument("GradedMesh: grading exponent must be >= 1");
    nodes_.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        nodes_[k] = horizon * std::pow(static_cast<double>(k) / static_cast<double>(steps), grading);
    nodes_.back() = horizon;
}

ForcingSpec zero_forcing(std::size_t n_modes, double alpha, double beta, double sigma) {
    ForcingSpec f;
    f.reduced = [n_modes](double) { return SpectralVector(n_modes); };
    f.alpha = alpha;
    f.beta = beta;
    f.sigma = sigma;
    f.singular_coeff = SpectralVector(n_modes);
    return f;
}

Trajectory sample_reduced_forcing(const ForcingSpec& forcing, const GradedMesh& mesh) {
    std::vector<double> times(mesh.nodes().begin() + 1, mesh.nodes().end());
    return sample_function(forcing.reduced, std::move(times), mesh.horizon());
}

namespace {

SpectralVector estimate_singular_coeff(const ForcingSpec& forcing, double t1) {
    const double eps = 0.25 * t1;
    const double w = 1.0 - forcing.beta;
    const SpectralVector g1 = std::pow(eps, w) * forcing.reduced(eps);
    const SpectralVector g2 = std::pow(2.0 * eps, w) * forcing.reduced(2.0 * eps);
    return 2.0 * g1 - g2;
}

// int_0^{t1} e^{-lambda (t1 - s)} r(s) ds with r linear through (t1/2, r_half) and (t1, r1).
double first_interval(double lambda, double t1, double r_half, double r1) {
    const auto w = phi_kernels(lambda * t1);
    return t1 * ((2.0 * r_half - r1) * w.phi1 + 2.0 * (r1 - r_half) * w.phi2);
}

}  // namespace

MildSolution solve_mild_deterministic(const SpectralOperator& op, const SpectralVector& xi,
                                      const ForcingSpec& forcing, const GradedMesh& mesh) {
    if (auto gate = forcing.gate(); !gate) throw GateViolation(gate);
    if (!xi.all_finite()) throw std::invalid_argument("solve_mild_deterministic: non-finite xi");
    const std::size_t N = op.size();
    if (xi.size() != N) throw std::invalid_argument("solve_mild_deterministic: xi has wrong mode count");

    MildSolution out;
    const double alpha = forcing.alpha;
    const double beta = forcing.beta;
    if (mesh.grading() < 1.0 / beta) {
        std::ostringstream os;
        os << "mesh grading r=" << mesh.grading() << " is below 1/beta=" << 1.0 / beta;
        out.warnings.push_back(os.str());
    }

    const auto& t = mesh.nodes();
    const std::size_t K = mesh.steps();

    out.singular_coeff = forcing.singular_coeff ? *forcing.singular_coeff
                                                : estimate_singular_coeff(forcing, t[1]);
    const SpectralVector& c = out.singular_coeff;
    if (c.size() != N || !c.all_finite())
        throw std::invalid_argument("solve_mild_deterministic: bad singular coefficient");

    // remainder r(s) = A^{-alpha}F(s) - c s^{beta-1} at t_1/2 and every node t_k, k >= 1
    auto remainder = [&](double s) {
        SpectralVector v = forcing.reduced(s);
        if (v.size() != N) throw std::invalid_argument("forcing returned wrong mode count");
        if (!v.all_finite()) {
            std::ostringstream os;
            os << "forcing is not finite at s=" << s;
            throw std::invalid_argument(os.str());
        }
        v -= std::pow(s, beta - 1.0) * c;
        return v;
    };
    const SpectralVector r_half = remainder(0.5 * t[1]);
    std::vector<SpectralVector> r(K + 1);
    for (std::size_t k = 1; k <= K; ++k) r[k] = remainder(t[k]);

    out.path.horizon = mesh.horizon();
    out.path.times = t;
    out.path.values.assign(K + 1, SpectralVector(N));

    for (std::size_t n = 0; n < N; ++n) {
        const double lambda = op.eigenvalue(n);
        const double lift = std::pow(lambda, alpha);
        double integral = 0.0;
        out.path.values[0][n] = xi[n];
        for (std::size_t k = 1; k <= K; ++k) {
            if (k == 1) {
                integral = first_interval(lambda, t[1], r_half[n], r[1][n]);
            } else {
                const double h = t[k] - t[k - 1];
                const auto w = phi_kernels(lambda * h);
                integral = w.phi0 * integral +
                           h * (r[k - 1][n] * w.phi1 + (r[k][n] - r[k - 1][n]) * w.phi2);
            }
            const double singular =
                c[n] == 0.0 ? 0.0
                            : c[n] * std::pow(t[k], beta) * power_kernel(beta - 1.0, lambda * t[k]);
            out.path.values[k][n] = std::exp(-lambda * t[k]) * xi[n] + lift * (singular + integral);
        }
    }
    return out;
}

Trajectory apply_power(const SpectralOperator& op, double theta, const Trajectory& traj) {
    Trajectory out;
    out.horizon = traj.horizon;
    out.times = traj.times;
    out.values.reserve(traj.size());
    for (const auto& v : traj.values) out.values.push_back(fractional_power_apply(op, theta, v));
    return out;
}

std::vector<double> theorem1_ratios(const Trajectory& solution, double xi_norm,
                                    double forcing_norm, double alpha, double beta) {
    const double iota_alpha = smoothing_envelope(alpha);
    const double iota_0 = 1.0;
    const double b = beta_function(beta, 1.0 - alpha);
    std::vector<double> out(solution.size());
    for (std::size_t k = 0; k < solution.size(); ++k) {
        const double num = solution.values[k].norm();
        const double den = iota_alpha * b * forcing_norm * std::pow(solution.times[k], beta - alpha) +
                           iota_0 * xi_norm;
        out[k] = den > 0.0 ? num / den : (num > 0.0 ? INFINITY : 0.0);
    }
    return out;
}

namespace {

struct Theorem1Run {
    MildSolution solution;
    double forcing_norm = 0.0;
    std::vector<double> ratios;
    double sup_ratio = 0.0;
    std::vector<HolderReport> regularity;
    double continuity_at_zero = 0.0;
    double max_jump = 0.0;
    bool finite_top = true;
};

Theorem1Run run_theorem1(const SpectralOperator& op, const SpectralVector& xi,
                         const ForcingSpec& forcing, const GradedMesh& mesh,
                         const std::vector<double>& gammas) {
    Theorem1Run run;
    run.solution = solve_mild_deterministic(op, xi, forcing, mesh);
    run.forcing_norm =
        weighted_holder_norm(sample_reduced_forcing(forcing, mesh), forcing.beta, forcing.sigma).norm;
    run.ratios = theorem1_ratios(run.solution.path, xi.norm(), run.forcing_norm, forcing.alpha,
                                 forcing.beta);
    run.sup_ratio = *std::max_element(run.ratios.begin(), run.ratios.end());

    const Trajectory lifted = apply_power(op, forcing.alpha, run.solution.path);
    const Trajectory positive = lifted.window(mesh.node(1), mesh.horizon());
    std::vector<HolderExponents> exps;
    for (double g : gammas) exps.push_back({forcing.beta - forcing.sigma + g, g});
    run.regularity = weighted_holder_norms(positive, exps, {.allow_zero_sigma = true});

    // A^alpha X(t_k) -> A^alpha xi as t_k -> 0
    double d_max = 0.0;
    std::vector<double> d(lifted.size());
    for (std::size_t k = 0; k < lifted.size(); ++k) {
        d[k] = distance(lifted.values[k], lifted.values[0]);
        d_max = std::max(d_max, d[k]);
    }
    run.continuity_at_zero = d_max > 0.0 ? d[1] / d_max : 0.0;

    const Trajectory top = apply_power(op, 1.0 - forcing.alpha, positive);
    const auto top_norms = top.norms();
    const double top_max = *std::max_element(top_norms.begin(), top_norms.end());
    for (std::size_t k = 0; k < top.size(); ++k) run.finite_top = run.finite_top && top.values[k].all_finite();
    for (std::size_t k = 1; k < top.size(); ++k)
        run.max_jump = std::max(run.max_jump, distance(top.values[k], top.values[k - 1]));
    if (top_max > 0.0) run.max_jump /= top_max;
    return run;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

VerificationReport verify_theorem1(const SpectralOperator& op, const SpectralVector& xi,
                                   const ForcingSpec& forcing, const GradedMesh& mesh,
                                   const Theorem1Options& options) {
    if (auto gate = forcing.gate(); !gate) throw GateViolation(gate);
    std::vector<double> gammas = options.gammas;
    if (gammas.empty()) gammas = {0.0, 0.5 * forcing.sigma, forcing.sigma};
    for (double g : gammas)
        if (!(g >= 0.0 && g <= forcing.sigma))
            throw std::invalid_argument("verify_theorem1: gamma must lie in [0, sigma]");

    VerificationReport report;
    report.subcommand = "verify-det";
    const Theorem1Run run = run_theorem1(op, xi, forcing, mesh, gammas);
    report.warnings = run.solution.warnings;

    const double limit = 1.0 + options.ratio_tolerance;
    report.add_check("growth_bound", "||X(t)|| <= iota_a B(b,1-a) ||A^-a F||_{b,s} t^(b-a) + iota_0 ||xi||",
                     run.sup_ratio, limit, run.sup_ratio <= limit,
                     "sup over nodes; iota_a=" + fmt(smoothing_envelope(forcing.alpha)) +
                         " B=" + fmt(beta_function(forcing.beta, 1.0 - forcing.alpha)) +
                         " ||A^-a F||=" + fmt(run.forcing_norm));

    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const auto& h = run.regularity[i];
        report.add_check("regularity_gamma_" + fmt(gammas[i]),
                         "A^a X in F^(b-s+g, g) for g in [0, s]", h.norm, INFINITY,
                         std::isfinite(h.norm),
                         "beta'=" + fmt(h.beta) + " sigma'=" + fmt(h.sigma));
    }
    report.add_check("continuity_at_zero", "A^a X continuous on [0,T] at t=0", run.continuity_at_zero,
                     0.1, run.continuity_at_zero <= 0.1,
                     "||A^a X(t_1) - A^a xi|| relative to the largest deviation");
    report.add_check("continuity_top", "X continuous on (0,T] into D(A^(1-a))", run.max_jump, 0.1,
                     run.finite_top && run.max_jump <= 0.1,
                     "largest consecutive-node jump of A^(1-a) X relative to its sup");

    if (options.with_series) {
        report.series.push_back({"growth_ratio", run.solution.path.times, run.ratios, limit});
    }

    if (options.refine) {
        const GradedMesh fine = mesh.refined(2);
        const Theorem1Run frun = run_theorem1(op, xi, forcing, fine, gammas);
        const double K = static_cast<double>(mesh.steps());
        report.add_refinement("growth_ratio_sup", "K", K, 2 * K, run.sup_ratio, frun.sup_ratio,
                              options.ratio_stability);
        for (std::size_t i = 0; i < gammas.size(); ++i)
            report.add_refinement("regularity_norm_gamma_" + fmt(gammas[i]), "K", K, 2 * K,
                                  run.regularity[i].norm, frun.regularity[i].norm,
                                  options.norm_stability);
    }
    return report;
}

}  // namespace evoreg
