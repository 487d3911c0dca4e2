// One line per acceptance criterion; exit status 0 iff every criterion passes.

#include "evoreg/config.hpp"
#include "evoreg/det_solver.hpp"
#include "evoreg/holder.hpp"
#include "evoreg/spectral.hpp"
#include "evoreg/stoch_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef EVOREG_CLI_PATH
#define EVOREG_CLI_PATH "evoreg"
#endif

using namespace evoreg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void need(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string f(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double rel_err(const SpectralVector& a, const SpectralVector& b) {
    return distance(a, b) / std::max(b.norm(), 1e-300);
}

/// Composite Gauss-Legendre 7-point rule with interval halving; independent of the solver.
double adaptive_quad(const std::function<double(double)>& g, double a, double b, double tol, int depth = 0) {
    static const double x[] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
                               0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
    static const double w[] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                               0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                               0.1294849661688697};
    auto gl = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
        double s = 0.0;
        for (int i = 0; i < 7; ++i) s += w[i] * g(c + r * x[i]);
        return s * r;
    };
    const double m = 0.5 * (a + b);
    const double whole = gl(a, b);
    const double halves = gl(a, m) + gl(m, b);
    if (std::abs(whole - halves) <= tol || depth > 60) return halves;
    return adaptive_quad(g, a, m, 0.5 * tol, depth + 1) + adaptive_quad(g, m, b, 0.5 * tol, depth + 1);
}

SpectralVector random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> nd;
    SpectralVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

Outcome criterion1() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto op = build_cable_operator(std::numbers::pi, 256);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> time(0.0, 2.0), theta(-1.0, 1.0), re(-50.0, 50.0), im(0.1, 50.0);
    double semigroup = 0.0, power = 0.0, resolvent = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = random_vector(rng, op.size());
        const double s = time(rng), t = time(rng);
        semigroup = std::max(semigroup, rel_err(semigroup_apply(op, t, semigroup_apply(op, s, x)),
                                                semigroup_apply(op, t + s, x)));
        const double a = theta(rng), b = theta(rng);
        power = std::max(power, rel_err(fractional_power_apply(op, a, fractional_power_apply(op, b, x)),
                                        fractional_power_apply(op, a + b, x)));
        const std::complex<double> lam(re(rng), trial % 2 ? im(rng) : -im(rng));
        const auto r = resolvent_apply(op, lam, x);
        double num = 0.0;
        for (std::size_t n = 0; n < op.size(); ++n)
            num += std::norm((lam - op.eigenvalue(n)) * r[n] - x[n]);
        resolvent = std::max(resolvent, std::sqrt(num) / x.norm());
    }
    const double dt = seconds_since(t0);
    o.need(semigroup <= 1e-12, "S(t+s)=S(t)S(s) max rel " + f(semigroup, 3));
    o.need(power <= 1e-12, "A^a A^b=A^(a+b) max rel " + f(power, 3));
    o.need(resolvent <= 1e-12, "(l-A)R(l)=I max rel " + f(resolvent, 3));
    o.need(dt < 1.0, "runtime " + f(dt, 3) + " s at N=256");
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto t0 = Clock::now();
    // The cable spectrum for L = pi is coarse at its low end, so attainment is measured on a
    // long cable whose eigenvalues 1 + (n/100)^2 are dense on [1, 1e4].
    const auto coarse = build_cable_operator(std::numbers::pi, 256);
    const auto dense = build_cable_operator(100.0 * std::numbers::pi, 10001);
    double worst_bound = 0.0, worst_gap = 0.0, coarse_gap = 0.0;
    for (double theta : {0.25, 0.5, 1.0}) {
        const double env = std::pow(theta / std::numbers::e, theta);
        for (int i = 0; i < 100; ++i) {
            const double t = std::pow(10.0, -4.0 + 5.0 * i / 99.0);
            for (const auto* op : {&coarse, &dense}) {
                // Exact diagonal norm computed here, independently of operator_norm_semigroup.
                double exact = 0.0;
                for (double lam : op->eigenvalues())
                    exact = std::max(exact, std::pow(lam, theta) * std::exp(-lam * t));
                const double lib = operator_norm_semigroup(*op, theta, t);
                o.pass = o.pass && std::abs(lib - exact) <= 1e-12 * exact;
                const double ratio = exact * std::pow(t, theta) / env;
                worst_bound = std::max(worst_bound, ratio);
                const double peak = theta / t;
                if (peak >= op->lambda_min() && peak <= op->lambda_max()) {
                    if (op == &dense) worst_gap = std::max(worst_gap, 1.0 - ratio);
                    else coarse_gap = std::max(coarse_gap, 1.0 - ratio);
                }
            }
        }
    }
    const double dt = seconds_since(t0);
    o.need(o.pass, "operator_norm_semigroup matches the direct diagonal maximum");
    o.need(worst_bound <= 1.0 + 1e-12, "max t^th ||A^th S(t)|| / (th/e)^th = " + f(worst_bound, 10));
    o.need(worst_gap <= 1e-3, "attainment gap " + f(worst_gap, 3) + " with th/t in the dense spectrum");
    o.detail += " (gap on the L=pi cable " + f(coarse_gap, 3) + ", set by its eigenvalue spacing)";
    o.need(dt < 1.0, "runtime " + f(dt, 3) + " s");
    return o;
}

struct DetScenario {
    std::string name;
    double beta, sigma, alpha;
    ForcingSpec forcing;
};

std::vector<DetScenario> det_scenarios(std::size_t N) {
    std::vector<DetScenario> out;
    for (auto [beta, sigma, alpha] : {std::tuple{1.0, 0.3, 0.5}, std::tuple{0.7, 0.2, 0.35}}) {
        ForcingSpec fs;
        fs.alpha = alpha;
        fs.beta = beta;
        fs.sigma = sigma;
        fs.reduced = [N, beta](double s) { return SpectralVector::unit(N, 0, std::pow(s, beta - 1.0)); };
        out.push_back({"single-mode beta=" + f(beta), beta, sigma, alpha, fs});
    }
    std::vector<double> dir(N);
    for (std::size_t n = 0; n < N; ++n) dir[n] = 1.0 / double((1 + n) * (1 + n));
    const auto member = make_member(0.8, 0.2, "cusp", SpectralVector(dir), 1.0);
    ForcingSpec fs;
    fs.alpha = 0.35;
    fs.beta = 0.8;
    fs.sigma = 0.2;
    fs.reduced = [member](double s) { return member(s); };
    out.push_back({"multi-mode cusp member", 0.8, 0.2, 0.35, fs});
    return out;
}

Outcome criterion3() {
    Outcome o;
    const auto t0 = Clock::now();
    const std::size_t N = 64;
    const auto op = build_cable_operator(std::numbers::pi, N);
    const GradedMesh mesh(1.0, 2000, 2.0);
    for (const auto& sc : det_scenarios(N)) {
        const auto rep = verify_theorem1(op, SpectralVector(N), sc.forcing, mesh);
        const auto* growth = rep.find("growth_bound");
        const auto row = std::find_if(rep.refinement.begin(), rep.refinement.end(),
                                      [](const RefinementRow& r) { return r.quantity == "growth_ratio_sup"; });
        o.need(growth && growth->value <= 1.02, sc.name + ": sup ratio " + f(growth ? growth->value : NAN));
        o.need(row != rep.refinement.end() && row->rel_change <= 0.02,
               "K=4000 change " + f(row != rep.refinement.end() ? row->rel_change : NAN, 3));
    }
    const double dt = seconds_since(t0);
    o.need(dt < 10.0, "runtime " + f(dt, 3) + " s at N=64");
    return o;
}

double det_max_error(std::size_t K) {
    const double beta = 0.7, alpha = 0.35;
    const auto op = build_cable_operator(std::numbers::pi, 1);
    const double lam = op.eigenvalue(0);
    ForcingSpec fs;
    fs.alpha = alpha;
    fs.beta = beta;
    fs.sigma = 0.2;
    fs.reduced = [beta](double s) { return SpectralVector{std::pow(s, beta - 1.0)}; };
    const GradedMesh mesh(1.0, K, 2.0);
    const auto sol = solve_mild_deterministic(op, SpectralVector(1), fs, mesh);
    double err = 0.0;
    for (std::size_t k = 1; k < mesh.nodes().size(); ++k) {
        const double t = mesh.node(k);
        const double oracle =
            std::pow(lam, alpha) *
            adaptive_quad([&](double s) { return std::exp(-lam * (t - s)) * std::pow(s, beta - 1.0); }, 0.0,
                          t, 1e-10 * std::pow(t, beta));
        err = std::max(err, std::abs(sol.path.values[k][0] - oracle) / std::abs(oracle));
    }
    return err;
}

Outcome criterion4() {
    Outcome o;
    const double e1 = det_max_error(2000);
    const double e2 = det_max_error(4000);
    o.need(e1 <= 1e-6, "max-node rel error " + f(e1, 3) + " at K=2000");
    // Both errors at the rounding floor leave the reduction factor undefined.
    const double floor = 1e-13;
    const double factor = e1 / e2;
    o.need(e1 > floor && factor >= 3.0,
           "reduction factor " + f(factor, 3) + " (K=4000 error " + f(e2, 3) + ")" +
               (e1 <= floor ? ", both errors at the rounding floor so the rate is not measurable" : ""));
    return o;
}

Outcome criterion5() {
    Outcome o;
    const auto t0 = Clock::now();
    MCOptions mc;
    mc.replicas = 10000;
    mc.seed = 2024;
    {
        const auto op = build_cable_operator(std::numbers::pi, 3);
        const auto noise = constant_noise(3, 1.0, 0.8, 0.2);
        const auto m = mc_expected_norms(op, &noise, nullptr, GradedMesh(1.0, 16, 1.0), mc);
        const auto& e = m.norm_sq.back();
        const double z = std::abs(e.mean - 0.777748) / e.std_error;
        o.need(z <= 3.0, "N=3 g=1: MC " + f(e.mean, 6) + " +- " + f(e.std_error, 2) + " vs 0.777748, " +
                             f(z, 3) + " SE");
    }
    {
        const auto op = build_cable_operator(std::numbers::pi, 64);
        const auto noise = inverse_eigen_noise(op, 0.8, 0.2);
        double oracle = 0.0;
        for (double lam : op.eigenvalues())
            oracle += adaptive_quad([lam](double s) { return std::exp(-2.0 * lam * (1.0 - s)) / (lam * lam); },
                                    0.0, 1.0, 1e-14);
        const auto m = mc_expected_norms(op, &noise, nullptr, GradedMesh(1.0, 16, 1.0), mc);
        const auto& e = m.norm_sq.back();
        const double z = std::abs(e.mean - oracle) / e.std_error;
        o.need(z <= 3.0, "N=64 g=1/lambda: MC " + f(e.mean, 6) + " vs quadrature " + f(oracle, 6) + ", " +
                             f(z, 3) + " SE");
    }
    const double dt = seconds_since(t0);
    o.need(dt < 30.0, "runtime " + f(dt, 3) + " s");
    return o;
}

Outcome criterion6() {
    Outcome o;
    const auto op = build_cable_operator(std::numbers::pi, 64);
    const auto noise = smooth_decay_noise(op, 0.8, 0.2);
    StochOptions so;
    so.replicas = 1000;
    so.seed = 11;
    so.alpha1 = 0.3;
    so.gamma = 0.15;
    const auto rep = verify_theorem2(op, noise, SpectralVector(64), GradedMesh(1.0, 256, 2.0), so);
    const auto* c = rep.find("empirical_constant");
    o.need(c && std::isfinite(c->value), "C_hat " + f(c ? c->value : NAN));
    for (const auto& r : rep.refinement)
        if (r.quantity == "empirical_constant")
            o.need(r.passed, "C_hat " + r.axis + " " + f(r.coarse_level) + "->" + f(r.fine_level) + " change " +
                                 f(r.rel_change, 3));
    const auto* reg = rep.find("moment_regularity");
    o.need(reg && reg->passed, "F^(0.8,0.2) norm of E||A^0.3 X|| " + f(reg ? reg->value : NAN));
    const auto* mod = rep.find("moment_modulus_to_zero");
    o.need(mod && mod->passed, "modulus ratio over the first decade " + f(mod ? mod->value : NAN, 3));
    return o;
}

Trajectory scalar_path(const std::vector<double>& times, const std::vector<double>& values) {
    Trajectory t;
    t.times = times;
    t.horizon = times.back();
    for (double v : values) t.values.push_back(SpectralVector{v});
    return t;
}

Outcome criterion7() {
    Outcome o;
    const auto t0 = Clock::now();
    const double eps = 0.1, T = 1.0;
    const std::size_t M = 512;
    std::vector<double> times(M + 1);
    for (std::size_t k = 0; k <= M; ++k) times[k] = eps + (T - eps) * double(k) / double(M);

    {
        // 576 steps put the cusp t = T/2 on a node; on the 512-step grid it sits between nodes.
        auto cusp = [&](std::size_t steps) {
            std::vector<double> grid(steps + 1), v;
            for (std::size_t k = 0; k <= steps; ++k) grid[k] = eps + (T - eps) * double(k) / double(steps);
            for (double t : grid) v.push_back(std::pow(std::abs(t - T / 2), 0.3));
            return estimate_holder_exponent(std::vector<Trajectory>(16, scalar_path(grid, v)), eps, T).exponent;
        };
        const double est = cusp(576);
        o.need(std::abs(est - 0.3) <= 0.05, "cusp " + f(est, 3) + " (off-node cusp " + f(cusp(M), 3) + ")");
    }
    {
        std::mt19937_64 rng(99);
        std::normal_distribution<double> nd;
        std::vector<Trajectory> paths;
        for (int p = 0; p < 64; ++p) {
            std::vector<double> v{0.0};
            for (std::size_t k = 1; k <= M; ++k) v.push_back(v.back() + std::sqrt(times[k] - times[k - 1]) * nd(rng));
            paths.push_back(scalar_path(times, v));
        }
        const double est = estimate_holder_exponent(paths, eps, T).exponent;
        o.need(std::abs(est - 0.5) <= 0.1, "Brownian " + f(est, 3));
    }
    auto cable_exponent = [&](const NoiseSpec& noise, const SpectralOperator& op, double lift) {
        const GradedMesh mesh(T, M, 1.0);
        std::vector<Trajectory> paths;
        for (std::uint32_t p = 0; p < 64; ++p)
            paths.push_back(apply_power(op, lift, sample_stochastic_convolution(op, noise, mesh, 77, p).path));
        return estimate_holder_exponent(paths, eps, T);
    };
    {
        const auto op = build_cable_operator(std::numbers::pi, 64);
        const auto est = cable_exponent(smooth_decay_noise(op, 0.8, 0.2), op, 0.3);
        o.need(est.exponent >= 0.15, "cable A^0.3 X, sigma=0.2: " + f(est.exponent, 3) + " [" +
                                         f(est.band_lo, 3) + ", " + f(est.band_hi, 3) + "]");
    }
    {
        const auto op = build_cable_operator(std::numbers::pi, 256);
        const auto est = cable_exponent(walsh_white_noise(256), op, 0.0);
        o.need(std::abs(est.exponent - 0.25) <= 0.1,
               "walsh-white N=256 A^0 X: " + f(est.exponent, 3) + " (expected near 1/4)");
    }
    const double dt = seconds_since(t0);
    o.need(dt < 300.0, "runtime " + f(dt, 3) + " s");
    return o;
}

double slope(const std::vector<double>& h, const std::vector<double>& r) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        mx += std::log(h[i]);
        my += std::log(r[i]);
    }
    mx /= double(h.size());
    my /= double(h.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        sxy += (std::log(h[i]) - mx) * (std::log(r[i]) - my);
        sxx += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
    }
    return sxy / sxx;
}

Outcome criterion8() {
    Outcome o;
    const auto op = build_cable_operator(std::numbers::pi, 1);
    const std::size_t fine = 4096;
    const GradedMesh mesh(1.0, fine, 1.0);
    {
        const auto noise = constant_noise(1, 1.0, 0.8, 0.2);
        const std::vector<std::size_t> factors{64, 32, 16, 8, 4};
        std::vector<double> h, res(factors.size(), 0.0);
        const int replicas = 32;
        for (std::size_t i = 0; i < factors.size(); ++i) h.push_back(double(factors[i]) / double(fine));
        for (int rep = 0; rep < replicas; ++rep) {
            const auto s = sample_stochastic_convolution(op, noise, mesh, 5, std::uint32_t(rep), {true});
            for (std::size_t i = 0; i < factors.size(); ++i) {
                const auto r = weak_residual(op, coarsen(s, factors[i], noise), SpectralVector(1), nullptr, 0);
                res[i] += *std::max_element(r.begin(), r.end()) / replicas;
            }
        }
        const double p = slope(h, res);
        o.need(p >= 0.9 && p <= 1.1, "pure-noise slope " + f(p, 3));
    }
    {
        const auto noise = constant_noise(1, 0.0, 0.8, 0.2);
        std::vector<double> h, res;
        for (std::size_t K : {32, 64, 128, 256, 512}) {
            const GradedMesh m(1.0, K, 1.0);
            const auto s = sample_stochastic_convolution(op, noise, m, 5, 0, {true});
            SampledPath det = s;
            for (std::size_t k = 0; k < m.nodes().size(); ++k) det.path.values[k] = SpectralVector{std::exp(-m.node(k))};
            const auto r = weak_residual(op, det, SpectralVector{1.0}, nullptr, 0);
            h.push_back(1.0 / double(K));
            res.push_back(*std::max_element(r.begin(), r.end()));
        }
        const double p = slope(h, res);
        double c = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) c = std::max(c, res[i] / (h[i] * h[i]));
        o.need(p >= 1.9 && p <= 2.1, "exact-cancellation slope " + f(p, 3) + ", residual <= " + f(c, 3) + " h^2");
    }
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion9() {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "evoreg_acceptance";
    fs::create_directories(dir);
    const std::string isometry = R"(operator: {L: 3.141592653589793, N: 8}
horizon: 1.0
exponents: {beta: 0.8, sigma: 0.2}
noise: {preset: smooth-decay}
mesh: {K: 64, r: 2}
mc: {replicas: 2000, master_seed: 31}
)";
    const std::string stoch = R"(operator: {L: 3.141592653589793, N: 16}
horizon: 1.0
exponents: {beta: 0.8, sigma: 0.2, alpha1: 0.3, gamma: 0.15, epsilon: 0.1}
noise: {preset: smooth-decay}
mesh: {K: 64, r: 2}
mc: {replicas: 200, master_seed: 8}
paths: {count: 16, steps: 128}
)";
    const std::string simulate = R"(operator: {L: 3.141592653589793, N: 32}
horizon: 1.0
exponents: {beta: 0.8, sigma: 0.2, alpha1: 0.3}
noise: {preset: smooth-decay}
mesh: {K: 128, r: 1}
mc: {replicas: 2, master_seed: 4}
paths: {count: 16, steps: 128}
)";
    for (const auto& [sub, text] : {std::pair{"isometry", isometry}, std::pair{"verify-stoch", stoch},
                                    std::pair{"simulate", simulate}}) {
        const fs::path cfg = dir / (std::string(sub) + ".yaml");
        std::ofstream(cfg) << text;
        std::vector<std::string> outputs;
        for (const char* threads : {"1", "8"}) {
            const fs::path out = dir / (std::string(sub) + "_" + threads);
            fs::remove_all(out);
            const std::string cmd = std::string("EVOREG_THREADS=") + threads + " \"" + EVOREG_CLI_PATH + "\" " +
                                    sub + " --config \"" + cfg.string() + "\" --seed 12345 --out \"" +
                                    out.string() + "\" > /dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            o.need(status != -1 && WEXITSTATUS(status) != 4 && WEXITSTATUS(status) != 2,
                   std::string(sub) + " threads=" + threads + " ran");
            outputs.push_back(slurp(out / "report.json"));
        }
        o.need(!outputs[0].empty() && outputs[0] == outputs[1],
               std::string(sub) + " JSON byte-identical (" + std::to_string(outputs[0].size()) + " bytes)");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::pair<int, std::function<Outcome()>>> all{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    bool all_pass = true;
    for (auto& [id, fn] : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.need(false, std::string("exception: ") + e.what());
        }
        all_pass = all_pass && o.pass;
        std::printf("criterion %d: %s  [%.2f s] %s\n", id, o.pass ? "PASS" : "FAIL", seconds_since(t0),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
