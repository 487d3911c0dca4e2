#include "evoreg/config.hpp"
#include "evoreg/harness.hpp"
#include "evoreg/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

bool write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    return static_cast<bool>(out);
}

std::string_view extension(evoreg::ReportFormat f) {
    switch (f) {
        case evoreg::ReportFormat::json: return "json";
        case evoreg::ReportFormat::csv: return "csv";
        case evoreg::ReportFormat::table: return "txt";
    }
    return "json";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evoreg: regularity experiments for parabolic evolution equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string format = "json";

    for (const char* name : {"simulate", "verify-det", "verify-stoch", "holder", "isometry"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "scenario YAML")->required();
        sub->add_option("--out", out_dir, "directory for report and path files");
        sub->add_option("--seed", seed, "overrides mc.master_seed");
        sub->add_option("--format", format, "json | csv | table")
            ->check(CLI::IsMember({"json", "csv", "table"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const auto sub = evoreg::parse_subcommand(app.get_subcommands().front()->get_name());
    const auto fmt = evoreg::parse_report_format(format);

    evoreg::ScenarioConfig config;
    try {
        config = evoreg::load_config(config_path);
    } catch (const evoreg::ConfigError& e) {
        for (const auto& m : e.messages()) std::cerr << "evoreg: " << e.kind() << " error: " << m << "\n";
        return e.kind() == "parse" ? evoreg::exit_io : evoreg::exit_gate;
    } catch (const std::exception& e) {
        std::cerr << "evoreg: " << e.what() << "\n";
        return evoreg::exit_io;
    }

    evoreg::RunOptions options;
    options.seed = seed;
    evoreg::RunResult result;
    try {
        result = evoreg::run_scenario(config, sub, options);
    } catch (const evoreg::GateViolation& e) {
        std::cerr << "evoreg: " << e.what() << "\n";
        return evoreg::exit_gate;
    } catch (const std::domain_error& e) {
        std::cerr << "evoreg: " << e.what() << "\n";
        return evoreg::exit_gate;
    } catch (const std::exception& e) {
        std::cerr << "evoreg: " << e.what() << "\n";
        return evoreg::exit_io;
    }

    const std::string body = evoreg::emit_report(result.report, fmt);
    if (out_dir.empty()) {
        std::cout << body;
    } else {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        bool ok = !ec;
        if (ok && config.write_reports)
            ok = write_file(fs::path(out_dir) / ("report." + std::string(extension(fmt))), body);
        for (const auto& [name, csv] : result.artifacts)
            ok = ok && write_file(fs::path(out_dir) / name, csv);
        if (!ok) {
            std::cerr << "evoreg: cannot write to " << out_dir << "\n";
            return evoreg::exit_io;
        }
        if (!config.write_reports) std::cout << body;
    }
    return result.report.passed() ? evoreg::exit_ok : evoreg::exit_check;
}
