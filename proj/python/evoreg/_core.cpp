#include "evoreg/config.hpp"
#include "evoreg/det_solver.hpp"
#include "evoreg/gates.hpp"
#include "evoreg/harness.hpp"
#include "evoreg/holder.hpp"
#include "evoreg/report.hpp"
#include "evoreg/special.hpp"
#include "evoreg/spectral.hpp"
#include "evoreg/stoch_solver.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace evoreg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

SpectralVector to_vector(const Array& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array of coefficients");
    return SpectralVector(std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const SpectralVector& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.coeffs().begin(), v.coeffs().end(), out.mutable_data());
    return out;
}

/// (times, values[k, n]) pair as a Trajectory.
Trajectory to_trajectory(const Array& times, const Array& values, double horizon) {
    if (times.ndim() != 1 || values.ndim() != 2 || values.shape(0) != times.shape(0))
        throw std::invalid_argument("expected times[K] and values[K, N]");
    Trajectory t;
    t.horizon = horizon > 0.0 ? horizon : (times.size() ? times.at(times.size() - 1) : 0.0);
    t.times.assign(times.data(), times.data() + times.size());
    const auto N = values.shape(1);
    for (py::ssize_t k = 0; k < values.shape(0); ++k)
        t.values.emplace_back(std::vector<double>(values.data(k, 0), values.data(k, 0) + N));
    return t;
}

py::tuple from_trajectory(const Trajectory& t) {
    const auto K = static_cast<py::ssize_t>(t.size());
    const auto N = static_cast<py::ssize_t>(K ? t.values[0].size() : 0);
    Array times(K), values({K, N});
    std::copy(t.times.begin(), t.times.end(), times.mutable_data());
    for (py::ssize_t k = 0; k < K; ++k)
        std::copy(t.values[k].coeffs().begin(), t.values[k].coeffs().end(), values.mutable_data(k, 0));
    return py::make_tuple(times, values);
}

py::dict gate_dict(const GateResult& g) {
    py::dict d;
    d["ok"] = g.ok;
    d["violations"] = g.violations;
    return d;
}

NoiseSpec noise_preset(const SpectralOperator& op, const std::string& name, double beta, double sigma,
                       double value) {
    if (name == "constant") return constant_noise(op.size(), value, beta, sigma);
    if (name == "smooth-decay") return smooth_decay_noise(op, beta, sigma);
    if (name == "inverse-eigen") return inverse_eigen_noise(op, beta, sigma);
    if (name == "walsh-white") return walsh_white_noise(op.size());
    throw std::invalid_argument("unknown noise preset '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral solvers and weighted Holder diagnostics for parabolic evolution equations";

    py::register_exception<GateViolation>(m, "GateViolation", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<SpectralOperator>(m, "SpectralOperator")
        .def(py::init([](const Array& eigenvalues, double length) {
                 return SpectralOperator(std::vector<double>(eigenvalues.data(), eigenvalues.data() + eigenvalues.size()),
                                         length);
             }),
             py::arg("eigenvalues"), py::arg("length"))
        .def_property_readonly("eigenvalues", [](const SpectralOperator& op) {
            return to_array(SpectralVector(std::vector<double>(op.eigenvalues().begin(), op.eigenvalues().end())));
        })
        .def_property_readonly("length", &SpectralOperator::length)
        .def("__len__", &SpectralOperator::size);

    m.def("cable_operator", &build_cable_operator, py::arg("length"), py::arg("modes"));
    m.def("semigroup_apply", [](const SpectralOperator& op, double t, const Array& x) {
        return to_array(semigroup_apply(op, t, to_vector(x)));
    }, py::arg("op"), py::arg("t"), py::arg("x"));
    m.def("fractional_power_apply", [](const SpectralOperator& op, double theta, const Array& x) {
        return to_array(fractional_power_apply(op, theta, to_vector(x)));
    }, py::arg("op"), py::arg("theta"), py::arg("x"));
    m.def("operator_norm_semigroup", &operator_norm_semigroup, py::arg("op"), py::arg("theta"), py::arg("t"));
    m.def("smoothing_envelope", &smoothing_envelope, py::arg("theta"));
    m.def("phi_kernels", [](double z) {
        const auto k = phi_kernels(z);
        return py::make_tuple(k.phi0, k.phi1, k.phi2);
    }, py::arg("z"));
    m.def("power_kernel", &power_kernel, py::arg("p"), py::arg("z"));

    m.def("validate_h3", [](double a, double b, double s) { return gate_dict(validate_H3(a, b, s)); },
          py::arg("alpha"), py::arg("beta"), py::arg("sigma"));
    m.def("validate_h4", [](double b, double s) { return gate_dict(validate_H4(b, s)); },
          py::arg("beta"), py::arg("sigma"));
    m.def("validate_joint", [](double a, double b, double s) { return gate_dict(validate_joint(a, b, s)); },
          py::arg("alpha"), py::arg("beta"), py::arg("sigma"));

    m.def("weighted_holder_norm", [](const Array& times, const Array& values, double beta, double sigma,
                                      double horizon) {
        const auto h = weighted_holder_norm(to_trajectory(times, values, horizon), beta, sigma);
        py::dict d;
        d["sup_term"] = h.sup_term;
        d["holder_term"] = h.holder_term;
        d["norm"] = h.norm;
        d["modulus"] = h.modulus;
        d["modulus_envelope"] = h.modulus_envelope;
        d["limit_at_zero"] = to_array(h.limit_at_zero);
        d["limit_exists"] = h.limit_exists;
        return d;
    }, py::arg("times"), py::arg("values"), py::arg("beta"), py::arg("sigma"), py::arg("horizon") = 0.0);

    m.def("graded_mesh", [](double T, std::size_t K, double r) {
        const auto& n = GradedMesh(T, K, r).nodes();
        Array out(static_cast<py::ssize_t>(n.size()));
        std::copy(n.begin(), n.end(), out.mutable_data());
        return out;
    }, py::arg("horizon"), py::arg("steps"), py::arg("grading") = 2.0);

    m.def("solve_mild", [](const SpectralOperator& op, const Array& xi,
                           const std::function<Array(double)>& reduced_forcing, double alpha, double beta,
                           double sigma, double horizon, std::size_t steps, double grading) {
        ForcingSpec f;
        f.alpha = alpha;
        f.beta = beta;
        f.sigma = sigma;
        f.reduced = [&](double s) {
            py::gil_scoped_acquire gil;
            return to_vector(reduced_forcing(s));
        };
        const auto x0 = to_vector(xi);
        MildSolution sol;
        {
            py::gil_scoped_release release;
            sol = solve_mild_deterministic(op, x0, f, GradedMesh(horizon, steps, grading));
        }
        return from_trajectory(sol.path);
    }, py::arg("op"), py::arg("xi"), py::arg("reduced_forcing"), py::arg("alpha"), py::arg("beta"),
       py::arg("sigma"), py::arg("horizon") = 1.0, py::arg("steps") = 2000, py::arg("grading") = 2.0,
       "Mild solution on a graded mesh; reduced_forcing(s) returns A^-alpha F(s).");

    m.def("ito_isometry_oracle", [](const SpectralOperator& op, const std::string& noise, double t, double beta,
                                     double sigma, double value) {
        return ito_isometry_oracle(op, noise_preset(op, noise, beta, sigma, value), t);
    }, py::arg("op"), py::arg("noise"), py::arg("t"), py::arg("beta") = 0.8, py::arg("sigma") = 0.2,
       py::arg("value") = 1.0);

    m.def("mc_second_moment", [](const SpectralOperator& op, const std::string& noise, double horizon,
                                 std::size_t steps, std::size_t replicas, std::uint64_t seed, double beta,
                                 double sigma, double value) {
        const auto spec = noise_preset(op, noise, beta, sigma, value);
        MCOptions mc;
        mc.replicas = replicas;
        mc.seed = seed;
        const auto res = mc_expected_norms(op, &spec, nullptr, GradedMesh(horizon, steps, 1.0), mc);
        return py::make_tuple(res.norm_sq.back().mean, res.norm_sq.back().std_error);
    }, py::arg("op"), py::arg("noise"), py::arg("horizon") = 1.0, py::arg("steps") = 16,
       py::arg("replicas") = 1000, py::arg("seed") = 1, py::arg("beta") = 0.8, py::arg("sigma") = 0.2,
       py::arg("value") = 1.0, "Monte Carlo E||W_G(T)||^2 and its standard error.");

    m.def("sample_path", [](const SpectralOperator& op, const std::string& noise, double horizon,
                            std::size_t steps, std::uint64_t seed, std::uint32_t replica, double beta,
                            double sigma, double value) {
        const auto spec = noise_preset(op, noise, beta, sigma, value);
        return from_trajectory(
            sample_stochastic_convolution(op, spec, GradedMesh(horizon, steps, 1.0), seed, replica).path);
    }, py::arg("op"), py::arg("noise"), py::arg("horizon") = 1.0, py::arg("steps") = 512, py::arg("seed") = 1,
       py::arg("replica") = 0, py::arg("beta") = 0.8, py::arg("sigma") = 0.2, py::arg("value") = 1.0);

    m.def("estimate_holder_exponent", [](const Array& times, const std::vector<Array>& paths, double epsilon,
                                         double horizon) {
        std::vector<Trajectory> trajs;
        for (const auto& p : paths) trajs.push_back(to_trajectory(times, p, horizon));
        const auto est = estimate_holder_exponent(trajs, epsilon, horizon);
        return py::make_tuple(est.exponent, est.band_lo, est.band_hi);
    }, py::arg("times"), py::arg("paths"), py::arg("epsilon"), py::arg("horizon"));

    m.def("parse_config", [](const std::string& text) { return parse_config(text).canonical(); },
          py::arg("text"), "Validates a YAML scenario and returns its canonical form.");
    m.def("run_scenario", [](const std::string& text, const std::string& subcommand, const std::string& format,
                             std::optional<std::uint64_t> seed) {
        RunOptions o;
        o.seed = seed;
        const auto res = run_scenario(parse_config(text), parse_subcommand(subcommand), o);
        return py::make_tuple(emit_report(res.report, parse_report_format(format)), res.report.passed());
    }, py::arg("config"), py::arg("subcommand"), py::arg("format") = "json", py::arg("seed") = py::none(),
       "Runs a subcommand on a YAML scenario; returns (report text, passed).");
}
