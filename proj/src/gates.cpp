#include "evoreg/gates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evoreg {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void GateResult::merge(const GateResult& other) {
    ok = ok && other.ok;
    for (const auto& v : other.violations)
        if (std::find(violations.begin(), violations.end(), v) == violations.end()) violations.push_back(v);
}

std::string GateResult::message() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v;
    }
    return out;
}

GateResult validate_H3(double alpha, double beta, double sigma) {
    GateResult g;
    if (!finite_all({alpha, beta, sigma})) {
        g.fail("exponents must be finite");
        return g;
    }
    if (!(sigma > 0.0 && sigma < beta && beta <= 1.0))
        g.fail("(H3) 0<sigma<beta<=1 violated: sigma=" + num(sigma) + ", beta=" + num(beta));
    const double lo = (1.0 + sigma) / 4.0;
    if (!(alpha > lo))
        g.fail("(H3) (1+sigma)/4 < alpha violated: alpha=" + num(alpha) + " <= " + num(lo));
    if (!(alpha <= beta / 2.0))
        g.fail("(H3) alpha <= beta/2 violated: alpha=" + num(alpha) + " > " + num(beta / 2.0));
    return g;
}

GateResult validate_H4(double beta, double sigma) {
    GateResult g;
    if (!finite_all({beta, sigma})) {
        g.fail("exponents must be finite");
        return g;
    }
    if (!(beta <= 1.0)) g.fail("(H4) beta <= 1 violated: beta=" + num(beta));
    if (!(sigma > 0.0 && sigma < beta - 0.5))
        g.fail("(H4) 0<sigma<beta-1/2 violated: sigma=" + num(sigma) + ", beta-1/2=" +
               num(beta - 0.5));
    return g;
}

GateResult validate_alpha1(double alpha1, double sigma) {
    GateResult g;
    if (!(alpha1 > 0.0 && alpha1 <= 0.5 - sigma))
        g.fail("0<alpha1<=1/2-sigma violated: alpha1=" + num(alpha1) + ", 1/2-sigma=" +
               num(0.5 - sigma));
    return g;
}

AlphaInterval joint_alpha_interval(double beta, double sigma) {
    return {(1.0 + sigma) / 4.0, std::min(beta / 2.0, 0.5 - sigma)};
}

GateResult validate_joint(double alpha, double beta, double sigma) {
    GateResult g = validate_H3(alpha, beta, sigma);
    g.merge(validate_H4(beta, sigma));
    const auto iv = joint_alpha_interval(beta, sigma);
    if (iv.empty()) {
        g.fail("no alpha satisfies (1+sigma)/4 < alpha <= min(beta/2, 1/2-sigma): feasible region (" +
               num(iv.lower) + ", " + num(iv.upper) + "] is empty");
    } else if (!(alpha <= 0.5 - sigma)) {
        g.fail("alpha <= 1/2-sigma violated: alpha=" + num(alpha) + ", feasible region (" +
               num(iv.lower) + ", " + num(iv.upper) + "]");
    }
    return g;
}

}  // namespace evoreg
