#include "evoreg/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace evoreg {

using nlohmann::ordered_json;

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; }) &&
           std::all_of(refinement.begin(), refinement.end(),
                       [](const RefinementRow& r) { return r.passed; });
}

void VerificationReport::add_check(std::string name, std::string anchor, double value,
                                   double tolerance, bool ok, std::string detail) {
    checks.push_back({std::move(name), std::move(anchor), value, tolerance, ok, std::move(detail)});
}

double relative_change(double coarse, double fine) {
    const double scale = std::max(std::abs(coarse), std::abs(fine));
    if (scale == 0.0) return 0.0;
    return std::abs(fine - coarse) / scale;
}

void VerificationReport::add_refinement(std::string quantity, std::string axis,
                                        double coarse_level, double fine_level,
                                        double coarse_value, double fine_value, double tolerance) {
    RefinementRow row;
    row.quantity = std::move(quantity);
    row.axis = std::move(axis);
    row.coarse_level = coarse_level;
    row.fine_level = fine_level;
    row.coarse_value = coarse_value;
    row.fine_value = fine_value;
    row.rel_change = relative_change(coarse_value, fine_value);
    row.tolerance = tolerance;
    row.passed = std::isfinite(row.rel_change) && row.rel_change <= tolerance;
    refinement.push_back(std::move(row));
}

void VerificationReport::append(const VerificationReport& other, std::string_view prefix) {
    const std::string p(prefix);
    for (auto c : other.checks) {
        c.name = p + c.name;
        checks.push_back(std::move(c));
    }
    for (auto r : other.refinement) {
        r.quantity = p + r.quantity;
        refinement.push_back(std::move(r));
    }
    for (auto s : other.series) {
        s.name = p + s.name;
        series.push_back(std::move(s));
    }
    for (const auto& w : other.warnings) warnings.push_back(p + w);
}

const CheckRecord* VerificationReport::find(std::string_view name) const {
    auto it = std::find_if(checks.begin(), checks.end(),
                           [&](const CheckRecord& c) { return c.name == name; });
    return it == checks.end() ? nullptr : &*it;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    if (name == "table") return ReportFormat::table;
    throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

namespace {

// JSON has no encoding for non-finite numbers; they travel as strings.
ordered_json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double denum(const ordered_json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw std::invalid_argument("report JSON: expected a number");
}

ordered_json to_json(const VerificationReport& r) {
    ordered_json j;
    j["schema_version"] = r.schema_version;
    j["subcommand"] = r.subcommand;
    j["scenario_digest"] = r.scenario_digest;
    j["passed"] = r.passed();
    j["checks"] = ordered_json::array();
    for (const auto& c : r.checks) {
        j["checks"].push_back({{"name", c.name},
                               {"anchor", c.anchor},
                               {"value", num(c.value)},
                               {"tolerance", num(c.tolerance)},
                               {"passed", c.passed},
                               {"detail", c.detail}});
    }
    j["refinement"] = ordered_json::array();
    for (const auto& x : r.refinement) {
        j["refinement"].push_back({{"quantity", x.quantity},
                                   {"axis", x.axis},
                                   {"coarse_level", num(x.coarse_level)},
                                   {"fine_level", num(x.fine_level)},
                                   {"coarse_value", num(x.coarse_value)},
                                   {"fine_value", num(x.fine_value)},
                                   {"rel_change", num(x.rel_change)},
                                   {"tolerance", num(x.tolerance)},
                                   {"passed", x.passed}});
    }
    j["series"] = ordered_json::array();
    for (const auto& s : r.series) {
        ordered_json t = ordered_json::array(), v = ordered_json::array();
        for (double x : s.times) t.push_back(num(x));
        for (double x : s.values) v.push_back(num(x));
        j["series"].push_back(
            {{"name", s.name}, {"tolerance", num(s.tolerance)}, {"times", t}, {"values", v}});
    }
    j["warnings"] = r.warnings;
    return j;
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

std::string emit_table(const VerificationReport& r) {
    std::ostringstream os;
    os << "evoreg " << r.subcommand << "  digest " << r.scenario_digest << "  "
       << (r.passed() ? "PASS" : "FAIL") << "\n\n";
    os << std::left << std::setw(6) << "" << std::setw(40) << "check" << std::setw(14) << "value"
       << std::setw(12) << "tolerance" << "anchor\n";
    for (const auto& c : r.checks) {
        os << std::setw(6) << (c.passed ? "pass" : "FAIL") << std::setw(40) << c.name
           << std::setw(14) << fmt(c.value) << std::setw(12) << fmt(c.tolerance) << c.anchor
           << "\n";
        if (!c.detail.empty()) os << std::setw(6) << "" << "  " << c.detail << "\n";
    }
    if (!r.refinement.empty()) {
        os << "\nrefinement\n";
        for (const auto& x : r.refinement) {
            os << std::setw(6) << (x.passed ? "pass" : "FAIL") << std::setw(40) << x.quantity
               << x.axis << " " << fmt(x.coarse_level) << " -> " << fmt(x.fine_level) << ": "
               << fmt(x.coarse_value) << " -> " << fmt(x.fine_value) << "  rel "
               << fmt(x.rel_change, 3) << " (tol " << fmt(x.tolerance, 3) << ")\n";
        }
    }
    for (const auto& w : r.warnings) os << "warning: " << w << "\n";
    return os.str();
}

std::string emit_csv(const VerificationReport& r) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (const auto& s : r.series) {
        os << "# series " << s.name << "\n";
        os << "t,value,tolerance\n";
        for (std::size_t k = 0; k < s.times.size(); ++k)
            os << s.times[k] << "," << s.values[k] << "," << s.tolerance << "\n";
    }
    return os.str();
}

}  // namespace

std::string emit_report(const VerificationReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: return to_json(report).dump(2) + "\n";
        case ReportFormat::csv: return emit_csv(report);
        case ReportFormat::table: return emit_table(report);
    }
    throw std::invalid_argument("emit_report: unknown format");
}

VerificationReport parse_report_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument(std::string("report JSON: ") + e.what());
    }
    try {
        VerificationReport r;
        r.schema_version = j.at("schema_version").get<int>();
        r.subcommand = j.at("subcommand").get<std::string>();
        r.scenario_digest = j.at("scenario_digest").get<std::string>();
        for (const auto& c : j.at("checks")) {
            r.checks.push_back({c.at("name").get<std::string>(), c.at("anchor").get<std::string>(),
                                denum(c.at("value")), denum(c.at("tolerance")),
                                c.at("passed").get<bool>(), c.at("detail").get<std::string>()});
        }
        for (const auto& x : j.at("refinement")) {
            RefinementRow row;
            row.quantity = x.at("quantity").get<std::string>();
            row.axis = x.at("axis").get<std::string>();
            row.coarse_level = denum(x.at("coarse_level"));
            row.fine_level = denum(x.at("fine_level"));
            row.coarse_value = denum(x.at("coarse_value"));
            row.fine_value = denum(x.at("fine_value"));
            row.rel_change = denum(x.at("rel_change"));
            row.tolerance = denum(x.at("tolerance"));
            row.passed = x.at("passed").get<bool>();
            r.refinement.push_back(std::move(row));
        }
        for (const auto& s : j.at("series")) {
            Series out;
            out.name = s.at("name").get<std::string>();
            out.tolerance = denum(s.at("tolerance"));
            for (const auto& t : s.at("times")) out.times.push_back(denum(t));
            for (const auto& v : s.at("values")) out.values.push_back(denum(v));
            r.series.push_back(std::move(out));
        }
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("report JSON: ") + e.what());
    }
}

}  // namespace evoreg
