#include "evoreg/harness.hpp"

#include "evoreg/det_solver.hpp"
#include "evoreg/holder.hpp"
#include "evoreg/stoch_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace evoreg {

Subcommand parse_subcommand(std::string_view name) {
    if (name == "simulate") return Subcommand::simulate;
    if (name == "verify-det") return Subcommand::verify_det;
    if (name == "verify-stoch") return Subcommand::verify_stoch;
    if (name == "holder") return Subcommand::holder;
    if (name == "isometry") return Subcommand::isometry;
    throw std::invalid_argument("unknown subcommand '" + std::string(name) + "'");
}

std::string_view to_string(Subcommand sub) {
    switch (sub) {
        case Subcommand::simulate: return "simulate";
        case Subcommand::verify_det: return "verify-det";
        case Subcommand::verify_stoch: return "verify-stoch";
        case Subcommand::holder: return "holder";
        case Subcommand::isometry: return "isometry";
    }
    return "simulate";
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,mode,value\n";
    char buf[96];
    for (std::size_t k = 0; k < traj.size(); ++k) {
        for (std::size_t n = 0; n < traj.values[k].size(); ++n) {
            std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g\n", traj.times[k], n, traj.values[k][n]);
            out += buf;
        }
    }
    return out;
}

Trajectory parse_trajectory_csv(std::string_view text, double horizon) {
    Trajectory traj;
    traj.horizon = horizon;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "t,mode,value")
        throw std::invalid_argument("trajectory CSV: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t = 0.0, v = 0.0;
        std::size_t n = 0;
        if (std::sscanf(line.c_str(), "%lf,%zu,%lf", &t, &n, &v) != 3)
            throw std::invalid_argument("trajectory CSV: malformed row '" + line + "'");
        if (traj.times.empty() || traj.times.back() != t) {
            traj.times.push_back(t);
            traj.values.emplace_back();
        }
        auto& vec = traj.values.back();
        if (n != vec.size()) throw std::invalid_argument("trajectory CSV: modes out of order");
        std::vector<double> c(vec.coeffs().begin(), vec.coeffs().end());
        c.push_back(v);
        vec = SpectralVector(std::move(c));
    }
    traj.validate();
    return traj;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Trajectory deterministic_path(const ScenarioConfig& c, const SpectralOperator& op,
                              const GradedMesh& mesh) {
    const SpectralVector xi = make_initial(c, op.size());
    if (c.has_forcing()) return solve_mild_deterministic(op, xi, make_forcing(c, op.size()), mesh).path;
    Trajectory out;
    out.horizon = mesh.horizon();
    out.times = mesh.nodes();
    for (double t : out.times) out.values.push_back(semigroup_apply(op, t, xi));
    return out;
}

void require(bool ok, const std::string& what) {
    if (!ok) {
        GateResult g;
        g.fail(what);
        throw GateViolation(g);
    }
}

RunResult run_simulate(const ScenarioConfig& c, const RunOptions&) {
    RunResult res;
    auto& rep = res.report;
    const SpectralOperator op = make_operator(c);
    const GradedMesh mesh = make_mesh(c);
    Trajectory path = deterministic_path(c, op, mesh);
    if (c.has_noise()) {
        const NoiseSpec noise = make_noise(c, op);
        if (noise.walsh) rep.warnings.push_back("walsh-white noise is outside the noise gate");
        const SampledPath s = sample_stochastic_convolution(op, noise, mesh, c.master_seed, 0);
        for (std::size_t k = 0; k < path.size(); ++k) path.values[k] += s.path.values[k];
    }
    bool finite = true;
    for (const auto& v : path.values) finite = finite && v.all_finite();
    rep.add_check("finite_path", "X(t) in H at every node", finite ? 1.0 : 0.0, 1.0, finite);
    rep.series.push_back({"norm", path.times, path.norms(), INFINITY});

    if (c.write_paths) {
        std::string csv = trajectory_csv(path);
        const Trajectory back = parse_trajectory_csv(csv, path.horizon);
        const bool same = back.times == path.times && back.norms() == path.norms();
        rep.add_check("path_roundtrip", "re-ingested path norms equal in-memory norms",
                      same ? 1.0 : 0.0, 1.0, same);
        res.artifacts.emplace_back("path.csv", std::move(csv));
    }

    if (c.has_noise()) {
        const NoiseSpec noise = make_noise(c, op);
        const GradedMesh uniform(c.horizon, c.path_steps, 1.0);
        const double lift = c.exponents.alpha1.value_or(0.0);
        const Trajectory det = deterministic_path(c, op, uniform);
        std::vector<Trajectory> paths;
        for (std::size_t p = 0; p < c.path_count; ++p) {
            SampledPath s = sample_stochastic_convolution(op, noise, uniform, c.master_seed,
                                                          static_cast<std::uint32_t>(0x40000000u + p));
            for (std::size_t k = 0; k < s.path.size(); ++k) s.path.values[k] += det.values[k];
            paths.push_back(apply_power(op, lift, s.path));
        }
        const auto est = estimate_holder_exponent(paths, c.exponents.epsilon, c.horizon);
        rep.add_check("path_holder_exponent", "time Holder exponent of A^" + fmt(lift) + " X on [eps,T]",
                      est.exponent, INFINITY, std::isfinite(est.exponent),
                      "reported only; bootstrap 90% band [" + fmt(est.band_lo) + ", " +
                          fmt(est.band_hi) + "]");
    }
    return res;
}

RunResult run_verify_det(const ScenarioConfig& c, const RunOptions&) {
    require(c.exponents.alpha.has_value(), "verify-det needs exponents.alpha");
    RunResult res;
    const SpectralOperator op = make_operator(c);
    const GradedMesh mesh = make_mesh(c);
    const ForcingSpec forcing = make_forcing(c);
    Theorem1Options opt;
    if (c.exponents.gamma) opt.gammas = {*c.exponents.gamma};
    res.report = verify_theorem1(op, make_initial(c), forcing, mesh, opt);

    const std::size_t N2 = 2 * c.modes;
    Theorem1Options lite = opt;
    lite.refine = false;
    lite.with_series = false;
    const auto fine = verify_theorem1(make_operator(c, N2), make_initial(c, N2), make_forcing(c, N2),
                                      mesh, lite);
    res.report.add_refinement("growth_ratio_sup", "N", double(c.modes), double(N2),
                              res.report.find("growth_bound")->value, fine.find("growth_bound")->value,
                              opt.ratio_stability);
    return res;
}

StochOptions stoch_options(const ScenarioConfig& c, const RunOptions& o) {
    StochOptions s;
    s.replicas = *c.replicas;
    s.seed = c.master_seed;
    s.alpha1 = c.exponents.alpha1.value_or(0.0);
    s.gamma = c.exponents.gamma.value_or(0.75 * c.exponents.sigma);
    s.epsilon = c.exponents.epsilon;
    s.nu = c.exponents.nu;
    s.path_count = c.path_count;
    s.path_steps = c.path_steps;
    s.workers = o.workers;
    return s;
}

RunResult run_verify_stoch(const ScenarioConfig& c, const RunOptions& o) {
    require(c.has_noise(), "verify-stoch needs a noise preset");
    require(!c.walsh(), "walsh-white noise is excluded from theorem verification");
    require(c.replicas && *c.replicas >= 100, "verify-stoch needs mc.replicas >= 100");
    if (!c.has_forcing()) require(c.exponents.alpha1.has_value(), "verify-stoch needs exponents.alpha1");

    RunResult res;
    const StochOptions opt = stoch_options(c, o);
    auto run = [&](std::size_t N, bool refine) {
        StochOptions s = opt;
        s.refine = refine;
        const SpectralOperator op = make_operator(c, N);
        const NoiseSpec noise = make_noise(c, op);
        const GradedMesh mesh = make_mesh(c);
        if (c.has_forcing())
            return verify_theorem3(op, noise, make_forcing(c, N), make_initial(c, N), mesh, s);
        return verify_theorem2(op, noise, make_initial(c, N), mesh, s);
    };
    res.report = run(c.modes, true);
    const auto fine = run(2 * c.modes, false);
    res.report.add_refinement("empirical_constant", "N", double(c.modes), double(2 * c.modes),
                              res.report.find("empirical_constant")->value,
                              fine.find("empirical_constant")->value, opt.constant_stability);
    return res;
}

RunResult run_holder(const ScenarioConfig& c, const RunOptions&) {
    RunResult res;
    auto& rep = res.report;
    const double beta = c.exponents.beta;
    const double sigma = c.exponents.sigma;

    auto sample = [&](std::size_t K) {
        const GradedMesh mesh = make_mesh(c, K);
        if (c.has_forcing()) return sample_reduced_forcing(make_forcing(c), mesh);
        require(c.has_noise() && !c.walsh(), "holder needs a forcing or a gated noise preset");
        return sample_noise_multipliers(make_noise(c, make_operator(c)), mesh);
    };
    if (c.has_forcing() && c.forcing.preset.rfind("remark1-", 0) == 0) {
        const auto m = make_member(beta, sigma, c.forcing.preset.substr(8), SpectralVector{1.0}, c.horizon);
        if (m.degenerate_replaced())
            rep.warnings.push_back("power member t^(beta-1) t^sigma is constant; replaced by g(t)=t^(2 sigma)");
    }

    const Trajectory traj = sample(c.steps);
    const HolderReport h = weighted_holder_norm(traj, beta, sigma);
    rep.add_check("holder_norm", "||f||_{b,s} = sup t^(1-b)||f|| + sup s^(1-b+s)||f(t)-f(s)||/(t-s)^s",
                  h.norm, INFINITY, std::isfinite(h.norm),
                  "sup term " + fmt(h.sup_term) + ", Holder term " + fmt(h.holder_term));
    for (const auto& b : pointwise_bounds_check(traj, h)) {
        std::string anchor = "w_f(t) <= ||f||_{b,s}";
        if (b.name == "growth") anchor = "||f(t)|| <= ||f||_{b,s} t^(b-1)";
        if (b.name == "increment") anchor = "||f(t)-f(s)|| <= w_f(t) (t-s)^s s^(b-s-1)";
        rep.add_check("pointwise_" + b.name, anchor, b.worst_ratio, 1.0, b.passed);
    }
    rep.add_check("limit_at_zero", "t^(1-b) f(t) has a limit as t -> 0", h.limit_at_zero.norm(), INFINITY,
                  h.limit_exists, "norm of the extrapolated limit");
    const auto& env = h.modulus_envelope;
    const double ratio = env.back() > 0.0 ? env[1] / env.back() : 0.0;
    rep.add_check("modulus_to_zero", "w_f(t) -> 0 as t -> 0", ratio, 0.1, ratio < 0.1,
                  "w_f at the second node over w_f(T)");
    rep.series.push_back({"modulus", traj.times, h.modulus_envelope, INFINITY});

    const HolderReport fine = weighted_holder_norm(sample(2 * c.steps), beta, sigma);
    rep.add_refinement("holder_norm", "K", double(c.steps), double(2 * c.steps), h.norm, fine.norm, 0.02);
    return res;
}

RunResult run_isometry(const ScenarioConfig& c, const RunOptions& o) {
    require(c.has_noise(), "isometry needs a noise preset");
    require(c.replicas && *c.replicas >= 100, "isometry needs mc.replicas >= 100");
    RunResult res;
    auto& rep = res.report;
    const SpectralOperator op = make_operator(c);
    const NoiseSpec noise = make_noise(c, op);
    if (noise.walsh) rep.warnings.push_back("walsh-white noise is outside the noise gate");
    const GradedMesh mesh = make_mesh(c);
    MCOptions mc;
    mc.replicas = *c.replicas;
    mc.seed = c.master_seed;
    mc.workers = o.workers;
    const MCMoments m = mc_expected_norms(op, &noise, nullptr, mesh, mc);
    const double oracle = ito_isometry_oracle(op, noise, c.horizon);
    const auto& est = m.norm_sq.back();
    const double z = est.std_error > 0.0 ? std::abs(est.mean - oracle) / est.std_error : 0.0;
    rep.add_check("ito_isometry", "E||W_G(t)||^2 = int_0^t ||S(t-s)G(s)||_HS^2 ds", z, 3.0, z <= 3.0,
                  "MC " + fmt(est.mean) + " +- " + fmt(est.std_error) + " vs oracle " + fmt(oracle) +
                      " at t=" + fmt(c.horizon) + " with R=" + std::to_string(est.replicas));
    std::vector<double> mean(m.times.size()), oracle_series(m.times.size());
    for (std::size_t k = 0; k < m.times.size(); ++k) {
        mean[k] = m.norm_sq[k].mean;
        oracle_series[k] = ito_isometry_oracle(op, noise, m.times[k]);
    }
    rep.series.push_back({"mc_second_moment", m.times, mean, INFINITY});
    rep.series.push_back({"oracle_second_moment", m.times, oracle_series, INFINITY});
    return res;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, Subcommand sub, const RunOptions& options) {
    ScenarioConfig c = config;
    if (options.seed) c.master_seed = *options.seed;
    if (auto g = validate_config(c); !g) throw GateViolation(g);

    const auto start = std::chrono::steady_clock::now();
    RunResult res;
    switch (sub) {
        case Subcommand::simulate: res = run_simulate(c, options); break;
        case Subcommand::verify_det: res = run_verify_det(c, options); break;
        case Subcommand::verify_stoch: res = run_verify_stoch(c, options); break;
        case Subcommand::holder: res = run_holder(c, options); break;
        case Subcommand::isometry: res = run_isometry(c, options); break;
    }
    res.report.subcommand = std::string(to_string(sub));
    res.report.scenario_digest = c.digest();
    res.report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace evoreg
