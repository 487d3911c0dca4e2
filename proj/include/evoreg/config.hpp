#pragma once

#include "evoreg/det_solver.hpp"
#include "evoreg/spectral.hpp"
#include "evoreg/stoch_solver.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace evoreg {

struct Exponents {
    double beta = 1.0;
    double sigma = 0.3;
    std::optional<double> alpha;
    std::optional<double> alpha1;
    std::optional<double> gamma;
    double nu = 0.25;
    double epsilon = 0.1;
};

struct InitialSpec {
    std::string preset = "zero";  // zero | unit | coefficients
    std::size_t mode = 0;
    double scale = 1.0;
    std::vector<double> coefficients;
};

struct ForcingConfig {
    /// none | power-single | constant | remark1-power | remark1-cusp | remark1-sine
    std::string preset = "none";
    std::size_t mode = 0;
    double scale = 1.0;
    std::vector<double> direction;  // empty: preset default
};

struct NoiseConfig {
    std::string preset = "none";  // none | smooth-decay | inverse-eigen | constant | walsh-white
    double value = 1.0;
};

struct ScenarioConfig {
    double length = 3.141592653589793;
    std::size_t modes = 64;
    double horizon = 1.0;
    Exponents exponents;
    InitialSpec initial;
    ForcingConfig forcing;
    NoiseConfig noise;
    std::size_t steps = 2000;
    double grading = 2.0;
    std::optional<std::size_t> replicas;
    std::uint64_t master_seed = 1;
    std::size_t path_count = 64;
    std::size_t path_steps = 512;
    bool write_paths = false;
    bool write_reports = true;

    bool has_forcing() const { return forcing.preset != "none"; }
    bool has_noise() const { return noise.preset != "none"; }
    bool walsh() const { return noise.preset == "walsh-white"; }

    /// Canonical text of every field; the scenario digest hashes it.
    std::string canonical() const;
    std::string digest() const;
};

/// Parse or gate failure. `kind` is "parse", "field" or "gate".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string kind, std::vector<std::string> messages);
    const std::string& kind() const noexcept { return kind_; }
    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    std::string kind_;
    std::vector<std::string> messages_;
};

/// Parses a YAML scenario and runs every exponent gate before returning.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// All gate checks of a config; empty result means valid.
GateResult validate_config(const ScenarioConfig& config);

/// Objects built from a config.
SpectralOperator make_operator(const ScenarioConfig& config, std::size_t modes = 0);
SpectralVector make_initial(const ScenarioConfig& config, std::size_t modes = 0);
ForcingSpec make_forcing(const ScenarioConfig& config, std::size_t modes = 0);
NoiseSpec make_noise(const ScenarioConfig& config, const SpectralOperator& op);
GradedMesh make_mesh(const ScenarioConfig& config, std::size_t steps = 0);

}  // namespace evoreg
