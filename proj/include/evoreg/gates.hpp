#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace evoreg {

/// Outcome of an exponent gate. Each violation carries the inequality it breaks.
struct GateResult {
    bool ok = true;
    std::vector<std::string> violations;

    explicit operator bool() const noexcept { return ok; }
    void fail(std::string what) {
        ok = false;
        violations.push_back(std::move(what));
    }
    void merge(const GateResult& other);
    std::string message() const;
};

/// Thrown when an operation is asked to run outside its exponent gate.
class GateViolation : public std::invalid_argument {
public:
    explicit GateViolation(GateResult result)
        : std::invalid_argument("gate violation: " + result.message()), result_(std::move(result)) {}
    const GateResult& result() const noexcept { return result_; }

private:
    GateResult result_;
};

/// Deterministic forcing gate: 0 < sigma < beta <= 1 and (1 + sigma)/4 < alpha <= beta/2.
GateResult validate_H3(double alpha, double beta, double sigma);

/// Noise gate: 0 < sigma < beta - 1/2, beta <= 1.
GateResult validate_H4(double beta, double sigma);

/// alpha in (0, 1/2 - sigma] for the smoothed stochastic moment.
GateResult validate_alpha1(double alpha1, double sigma);

/// Interval of alpha admitted jointly by the forcing gate and alpha <= 1/2 - sigma.
struct AlphaInterval {
    double lower = 0.0;  // exclusive
    double upper = 0.0;  // inclusive
    bool empty() const noexcept { return !(upper > lower); }
};

AlphaInterval joint_alpha_interval(double beta, double sigma);

/// Joint forcing + noise gate including alpha <= 1/2 - sigma; reports the
/// feasible alpha interval when it is empty.
GateResult validate_joint(double alpha, double beta, double sigma);

}  // namespace evoreg
