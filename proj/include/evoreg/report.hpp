#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evoreg {

inline constexpr int kReportSchemaVersion = 1;

/// One verified statement.
struct CheckRecord {
    std::string name;
    std::string anchor;  // the inequality or property being checked, in words
    double value = 0.0;  // bound ratio, estimate or relative spread
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;

    friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

/// A quantity re-measured at a coarse and a refined resolution.
struct RefinementRow {
    std::string quantity;
    std::string axis;  // "K", "N" or "R"
    double coarse_level = 0.0;
    double fine_level = 0.0;
    double coarse_value = 0.0;
    double fine_value = 0.0;
    double rel_change = 0.0;
    double tolerance = 0.0;
    bool passed = false;

    friend bool operator==(const RefinementRow&, const RefinementRow&) = default;
};

/// Node-wise series emitted to CSV as (t, value, tolerance).
struct Series {
    std::string name;
    std::vector<double> times;
    std::vector<double> values;
    double tolerance = 0.0;

    friend bool operator==(const Series&, const Series&) = default;
};

struct VerificationReport {
    int schema_version = kReportSchemaVersion;
    std::string subcommand;
    std::string scenario_digest;
    std::vector<CheckRecord> checks;
    std::vector<RefinementRow> refinement;
    std::vector<Series> series;
    std::vector<std::string> warnings;
    /// Wall-clock seconds; never serialised so reports stay byte-reproducible.
    double runtime_seconds = 0.0;

    bool passed() const;
    void add_check(std::string name, std::string anchor, double value, double tolerance,
                   bool passed, std::string detail = {});
    void add_refinement(std::string quantity, std::string axis, double coarse_level,
                        double fine_level, double coarse_value, double fine_value,
                        double tolerance);
    void append(const VerificationReport& other, std::string_view prefix = {});
    const CheckRecord* find(std::string_view name) const;

    friend bool operator==(const VerificationReport& a, const VerificationReport& b) {
        return a.schema_version == b.schema_version && a.subcommand == b.subcommand &&
               a.scenario_digest == b.scenario_digest && a.checks == b.checks &&
               a.refinement == b.refinement && a.series == b.series && a.warnings == b.warnings;
    }
};

/// Relative change |fine - coarse| / max(|coarse|, |fine|), 0 when both vanish.
double relative_change(double coarse, double fine);

enum class ReportFormat { json, csv, table };

ReportFormat parse_report_format(std::string_view name);

/// JSON keys: schema_version, subcommand, scenario_digest, passed, checks[], refinement[],
/// series[], warnings[]. CSV: per series a "# series <name>" line, then "t,value,tolerance" rows.
std::string emit_report(const VerificationReport& report, ReportFormat format);

/// Inverse of emit_report(json). Throws std::invalid_argument on malformed input.
VerificationReport parse_report_json(std::string_view text);

}  // namespace evoreg
