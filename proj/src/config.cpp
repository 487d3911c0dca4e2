#include "evoreg/config.hpp"

#include "evoreg/gates.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace evoreg {

ConfigError::ConfigError(std::string kind, std::vector<std::string> messages)
    : std::runtime_error([&] {
          std::string s = kind + " error";
          for (const auto& m : messages) s += "\n  " + m;
          return s;
      }()),
      kind_(std::move(kind)),
      messages_(std::move(messages)) {}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    if (m.line < 0) return "";
    return " (line " + std::to_string(m.line + 1) + ")";
}

template <class T>
T scalar(const YAML::Node& parent, const char* key, const std::string& path, T fallback) {
    const YAML::Node n = parent[key];
    if (!n) return fallback;
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("field", {"field '" + path + "' has the wrong type" + where(n)});
    }
}

template <class T>
std::optional<T> optional_scalar(const YAML::Node& parent, const char* key, const std::string& path) {
    if (!parent[key]) return std::nullopt;
    return scalar<T>(parent, key, path, T{});
}

std::vector<double> number_list(const YAML::Node& parent, const char* key, const std::string& path) {
    const YAML::Node n = parent[key];
    if (!n) return {};
    if (!n.IsSequence()) throw ConfigError("field", {"field '" + path + "' must be a list" + where(n)});
    try {
        return n.as<std::vector<double>>();
    } catch (const YAML::Exception&) {
        throw ConfigError("field", {"field '" + path + "' must hold numbers" + where(n)});
    }
}

void reject_unknown(const YAML::Node& node, const std::string& path,
                    std::initializer_list<const char*> known) {
    if (!node || !node.IsMap()) return;
    std::set<std::string> ok(known.begin(), known.end());
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!ok.count(key))
            throw ConfigError("field", {"unknown field '" + (path.empty() ? key : path + "." + key) +
                                        "'" + where(kv.first)});
    }
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::string ScenarioConfig::canonical() const {
    std::ostringstream os;
    auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("-"); };
    os << "operator.L=" << num(length) << ";N=" << modes << ";T=" << num(horizon)
       << ";beta=" << num(exponents.beta) << ";sigma=" << num(exponents.sigma)
       << ";alpha=" << opt(exponents.alpha) << ";alpha1=" << opt(exponents.alpha1)
       << ";gamma=" << opt(exponents.gamma) << ";nu=" << num(exponents.nu)
       << ";epsilon=" << num(exponents.epsilon) << ";initial=" << initial.preset << ","
       << initial.mode << "," << num(initial.scale);
    for (double c : initial.coefficients) os << "," << num(c);
    os << ";forcing=" << forcing.preset << "," << forcing.mode << "," << num(forcing.scale);
    for (double c : forcing.direction) os << "," << num(c);
    os << ";noise=" << noise.preset << "," << num(noise.value) << ";K=" << steps
       << ";r=" << num(grading) << ";R=" << (replicas ? std::to_string(*replicas) : "-")
       << ";seed=" << master_seed << ";paths=" << path_count << "x" << path_steps;
    return os.str();
}

std::string ScenarioConfig::digest() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
    return buf;
}

GateResult validate_config(const ScenarioConfig& c) {
    GateResult g;
    const auto& e = c.exponents;
    if (!(c.length > 0.0)) g.fail("operator.L > 0 violated");
    if (c.modes < 1) g.fail("operator.N >= 1 violated");
    if (!(c.horizon > 0.0)) g.fail("horizon T > 0 violated");
    if (c.steps < 16) g.fail("mesh.K >= 16 violated");
    if (!(c.grading >= 1.0)) g.fail("mesh.r >= 1 violated");
    if (!(e.sigma > 0.0 && e.sigma < e.beta && e.beta <= 1.0))
        g.fail("0<sigma<beta<=1 violated: sigma=" + num(e.sigma) + ", beta=" + num(e.beta));
    if (!(e.nu > 0.0 && e.nu < 0.5)) g.fail("0<nu<1/2 violated: nu=" + num(e.nu));
    if (!(e.epsilon > 0.0 && e.epsilon <= c.horizon))
        g.fail("epsilon in (0,T] violated: epsilon=" + num(e.epsilon));

    const bool noise_gated = c.has_noise() && !c.walsh();
    if (c.has_forcing() || e.alpha) {
        if (!e.alpha) g.fail("forcing present but exponents.alpha is missing");
        else g.merge(validate_H3(*e.alpha, e.beta, e.sigma));
    }
    if (noise_gated) {
        g.merge(validate_H4(e.beta, e.sigma));
        if (c.has_forcing() && e.alpha) g.merge(validate_joint(*e.alpha, e.beta, e.sigma));
        if (e.alpha1) g.merge(validate_alpha1(*e.alpha1, e.sigma));
        if (e.gamma && !(*e.gamma > 0.0 && *e.gamma < e.sigma))
            g.fail("0<gamma<sigma violated: gamma=" + num(*e.gamma));
    } else if (e.gamma && !(*e.gamma >= 0.0 && *e.gamma <= e.sigma)) {
        g.fail("gamma in [0,sigma] violated: gamma=" + num(*e.gamma));
    }
    if (c.has_noise() && (!c.replicas || *c.replicas < 2))
        g.fail("mc.replicas >= 2 required when noise is present");
    static const std::set<std::string> forcing_presets{"none", "power-single", "constant",
                                                       "remark1-power", "remark1-cusp", "remark1-sine"};
    static const std::set<std::string> noise_presets{"none", "smooth-decay", "inverse-eigen",
                                                     "constant", "walsh-white"};
    static const std::set<std::string> initial_presets{"zero", "unit", "coefficients"};
    if (!forcing_presets.count(c.forcing.preset)) g.fail("unknown forcing preset '" + c.forcing.preset + "'");
    if (!noise_presets.count(c.noise.preset)) g.fail("unknown noise preset '" + c.noise.preset + "'");
    if (!initial_presets.count(c.initial.preset)) g.fail("unknown initial preset '" + c.initial.preset + "'");
    if (c.initial.preset == "unit" && c.initial.mode >= c.modes) g.fail("initial.mode must be < N");
    if (c.forcing.preset == "power-single" && c.forcing.mode >= c.modes) g.fail("forcing.mode must be < N");
    return g;
}

ScenarioConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("parse", {"line " + std::to_string(e.mark.line + 1) + ", column " +
                                    std::to_string(e.mark.column + 1) + ": " + e.msg});
    }
    if (!root || !root.IsMap()) throw ConfigError("parse", {"document must be a mapping"});
    reject_unknown(root, "", {"operator", "horizon", "exponents", "initial", "forcing", "noise",
                              "mesh", "mc", "outputs", "paths"});

    ScenarioConfig c;
    const auto op = root["operator"];
    reject_unknown(op, "operator", {"L", "N"});
    if (op) {
        c.length = scalar<double>(op, "L", "operator.L", c.length);
        c.modes = scalar<std::size_t>(op, "N", "operator.N", c.modes);
    }
    c.horizon = scalar<double>(root, "horizon", "horizon", c.horizon);

    const auto ex = root["exponents"];
    reject_unknown(ex, "exponents", {"beta", "sigma", "alpha", "alpha1", "gamma", "nu", "epsilon"});
    if (ex) {
        c.exponents.beta = scalar<double>(ex, "beta", "exponents.beta", c.exponents.beta);
        c.exponents.sigma = scalar<double>(ex, "sigma", "exponents.sigma", c.exponents.sigma);
        c.exponents.alpha = optional_scalar<double>(ex, "alpha", "exponents.alpha");
        c.exponents.alpha1 = optional_scalar<double>(ex, "alpha1", "exponents.alpha1");
        c.exponents.gamma = optional_scalar<double>(ex, "gamma", "exponents.gamma");
        c.exponents.nu = scalar<double>(ex, "nu", "exponents.nu", c.exponents.nu);
        c.exponents.epsilon = scalar<double>(ex, "epsilon", "exponents.epsilon", c.exponents.epsilon);
    }

    const auto in = root["initial"];
    reject_unknown(in, "initial", {"preset", "mode", "scale", "coefficients"});
    if (in) {
        c.initial.preset = scalar<std::string>(in, "preset", "initial.preset", c.initial.preset);
        c.initial.mode = scalar<std::size_t>(in, "mode", "initial.mode", 0);
        c.initial.scale = scalar<double>(in, "scale", "initial.scale", 1.0);
        c.initial.coefficients = number_list(in, "coefficients", "initial.coefficients");
        if (!in["preset"] && !c.initial.coefficients.empty()) c.initial.preset = "coefficients";
    }

    const auto fo = root["forcing"];
    reject_unknown(fo, "forcing", {"preset", "mode", "scale", "direction"});
    if (fo) {
        c.forcing.preset = scalar<std::string>(fo, "preset", "forcing.preset", c.forcing.preset);
        c.forcing.mode = scalar<std::size_t>(fo, "mode", "forcing.mode", 0);
        c.forcing.scale = scalar<double>(fo, "scale", "forcing.scale", 1.0);
        c.forcing.direction = number_list(fo, "direction", "forcing.direction");
    }

    const auto no = root["noise"];
    reject_unknown(no, "noise", {"preset", "value"});
    if (no) {
        c.noise.preset = scalar<std::string>(no, "preset", "noise.preset", c.noise.preset);
        c.noise.value = scalar<double>(no, "value", "noise.value", c.noise.value);
    }

    const auto me = root["mesh"];
    reject_unknown(me, "mesh", {"K", "r"});
    if (me) {
        c.steps = scalar<std::size_t>(me, "K", "mesh.K", c.steps);
        c.grading = scalar<double>(me, "r", "mesh.r", c.grading);
    }

    const auto mc = root["mc"];
    reject_unknown(mc, "mc", {"replicas", "master_seed"});
    if (mc) {
        c.replicas = optional_scalar<std::size_t>(mc, "replicas", "mc.replicas");
        c.master_seed = scalar<std::uint64_t>(mc, "master_seed", "mc.master_seed", c.master_seed);
    }

    const auto pa = root["paths"];
    reject_unknown(pa, "paths", {"count", "steps"});
    if (pa) {
        c.path_count = scalar<std::size_t>(pa, "count", "paths.count", c.path_count);
        c.path_steps = scalar<std::size_t>(pa, "steps", "paths.steps", c.path_steps);
    }

    const auto out = root["outputs"];
    reject_unknown(out, "outputs", {"paths", "reports"});
    if (out) {
        c.write_paths = scalar<bool>(out, "paths", "outputs.paths", c.write_paths);
        c.write_reports = scalar<bool>(out, "reports", "outputs.reports", c.write_reports);
    }

    if (c.has_noise() && !c.replicas)
        throw ConfigError("field", {"missing field 'mc.replicas' (required when noise is present)"});

    if (auto g = validate_config(c); !g) throw ConfigError("gate", g.violations);
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

SpectralOperator make_operator(const ScenarioConfig& c, std::size_t modes) {
    return build_cable_operator(c.length, modes ? modes : c.modes);
}

SpectralVector make_initial(const ScenarioConfig& c, std::size_t modes) {
    const std::size_t N = modes ? modes : c.modes;
    if (c.initial.preset == "unit") return SpectralVector::unit(N, c.initial.mode, c.initial.scale);
    if (c.initial.preset == "coefficients") {
        SpectralVector v(c.initial.coefficients);
        return c.initial.scale * v.resized(N);
    }
    return SpectralVector(N);
}

namespace {

SpectralVector forcing_direction(const ScenarioConfig& c, std::size_t N) {
    if (!c.forcing.direction.empty())
        return c.forcing.scale * SpectralVector(c.forcing.direction).resized(N);
    SpectralVector v(N);
    for (std::size_t n = 0; n < N; ++n) v[n] = c.forcing.scale / ((1.0 + n) * (1.0 + n));
    return v;
}

}  // namespace

ForcingSpec make_forcing(const ScenarioConfig& c, std::size_t modes) {
    const std::size_t N = modes ? modes : c.modes;
    const auto& e = c.exponents;
    const double alpha = e.alpha.value_or(0.5);
    if (!c.has_forcing()) return zero_forcing(N, alpha, e.beta, e.sigma);

    ForcingSpec f;
    f.alpha = alpha;
    f.beta = e.beta;
    f.sigma = e.sigma;
    const std::string& p = c.forcing.preset;
    if (p == "power-single") {
        const SpectralVector v = SpectralVector::unit(N, c.forcing.mode, c.forcing.scale);
        const double beta = e.beta;
        f.reduced = [v, beta](double s) { return std::pow(s, beta - 1.0) * v; };
        f.singular_coeff = v;
    } else if (p == "constant") {
        const SpectralVector v = forcing_direction(c, N);
        f.reduced = [v](double) { return v; };
        f.singular_coeff = e.beta == 1.0 ? v : SpectralVector(N);
    } else {
        const std::string shape = p.substr(std::string("remark1-").size());
        const MemberFunction m = make_member(e.beta, e.sigma, shape, forcing_direction(c, N), c.horizon);
        f.reduced = [m](double s) { return m(s); };
        f.singular_coeff = SpectralVector(N);
    }
    return f;
}

NoiseSpec make_noise(const ScenarioConfig& c, const SpectralOperator& op) {
    const auto& e = c.exponents;
    const std::string& p = c.noise.preset;
    if (p == "smooth-decay") return smooth_decay_noise(op, e.beta, e.sigma);
    if (p == "inverse-eigen") return inverse_eigen_noise(op, e.beta, e.sigma);
    if (p == "constant") return constant_noise(op.size(), c.noise.value, e.beta, e.sigma);
    if (p == "walsh-white") return walsh_white_noise(op.size());
    throw std::invalid_argument("make_noise: no noise configured");
}

GradedMesh make_mesh(const ScenarioConfig& c, std::size_t steps) {
    return GradedMesh(c.horizon, steps ? steps : c.steps, c.grading);
}

}  // namespace evoreg
