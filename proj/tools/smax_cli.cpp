// smax: numerical laboratory for fractional Schrodinger means along
// decreasing time sequences.
//
// Usage:
//   smax <propagate|maximal|scaling|counterexample|classify|decompose>
//        --config <path> [--out <dir>] [--seed <int>] [--threads <int>]
//        [--format csv|text]
//
// Exit codes: 0 all checks pass, 1 a tolerance check failed, 2 config error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "smax/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fractional Schrodinger maximal-function laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string format = "csv";

    const char* kinds[] = {"propagate", "maximal",  "scaling",
                           "counterexample", "classify", "decompose"};
    for (const char* kind : kinds) {
        auto* sub = app.add_subcommand(kind);
        sub->add_option("--config", config_path, "experiment config file")
            ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed for probe families");
        sub->add_option("--threads", threads, "worker threads for sweeps")
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"csv", "text"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string kind = app.get_subcommands().front()->get_name();
        const auto cfg = smax::KeyValueConfig::parse_file(config_path);
        smax::RunnerOptions run;
        run.seed = seed;
        run.threads = threads;
        const auto report = smax::run_experiment(kind, cfg, run);
        const auto fmt = format == "csv" ? smax::ReportFormat::csv
                                         : smax::ReportFormat::text;
        const auto written = smax::emit_report(report, out_dir, fmt);
        for (const auto& p : written) std::cerr << "wrote " << p << "\n";
        std::cerr << "wall time: " << report.wall_seconds << " s\n";
        for (const auto& s : report.scalars) {
            if (s.kind == smax::CheckKind::none) continue;
            std::cerr << (s.pass ? "pass " : "FAIL ") << s.key << " = "
                      << smax::format_number(s.value) << " ("
                      << s.tolerance_text() << ")\n";
        }
        return report.all_pass() ? 0 : 1;
    } catch (const smax::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
