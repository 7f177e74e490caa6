#pragma once

// Experiment reports: keyed scalars with tolerance checks, tabular rows, and
// deterministic CSV / structured-text emission (write-then-rename, identical
// reports re-emit byte-identically). Wall-clock timings are kept on the
// report object but never serialized, so emission stays deterministic.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace smax {

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

enum class CheckKind { none, at_most, at_least, in_range };

struct ScalarResult {
    std::string key;
    double value = 0.0;
    CheckKind kind = CheckKind::none;
    double bound_lo = 0.0;  // at_least / in_range lower
    double bound_hi = 0.0;  // at_most / in_range upper
    bool pass = true;

    static ScalarResult info(std::string k, double v) {
        return {std::move(k), v, CheckKind::none, 0.0, 0.0, true};
    }
    static ScalarResult at_most(std::string k, double v, double hi) {
        return {std::move(k), v, CheckKind::at_most, 0.0, hi, v <= hi};
    }
    static ScalarResult at_least(std::string k, double v, double lo) {
        return {std::move(k), v, CheckKind::at_least, lo, 0.0, v >= lo};
    }
    static ScalarResult in_range(std::string k, double v, double lo, double hi) {
        return {std::move(k), v, CheckKind::in_range, lo, hi,
                v >= lo && v <= hi};
    }

    std::string tolerance_text() const {
        switch (kind) {
            case CheckKind::none:
                return "none";
            case CheckKind::at_most:
                return "<= " + format_number(bound_hi);
            case CheckKind::at_least:
                return ">= " + format_number(bound_lo);
            case CheckKind::in_range:
                return "in [" + format_number(bound_lo) + ", " +
                       format_number(bound_hi) + "]";
        }
        return "none";
    }
};

struct ExperimentReport {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<ScalarResult> scalars;
    std::vector<std::string> columns;           // CSV header
    std::vector<std::vector<double>> rows;      // CSV body
    double wall_seconds = 0.0;                  // not serialized

    void echo(std::string k, std::string v) {
        config_echo.emplace_back(std::move(k), std::move(v));
    }
    void add(ScalarResult r) { scalars.push_back(std::move(r)); }

    bool all_pass() const {
        for (const auto& s : scalars)
            if (!s.pass) return false;
        return true;
    }
};

namespace detail {

inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("emit_report: cannot open " + tmp);
        os << content;
        if (!os)
            throw std::runtime_error("emit_report: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline std::string render_csv(const ExperimentReport& rep) {
    std::string out;
    for (std::size_t c = 0; c < rep.columns.size(); ++c) {
        if (c) out += ',';
        out += rep.columns[c];
    }
    out += '\n';
    for (const auto& row : rep.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

inline std::string render_text(const ExperimentReport& rep) {
    std::string out;
    out += "kind = " + rep.kind + "\n";
    for (const auto& [k, v] : rep.config_echo)
        out += "config." + k + " = " + v + "\n";
    for (const auto& s : rep.scalars) {
        out += s.key + " = " + format_number(s.value);
        out += "  [tolerance: " + s.tolerance_text();
        out += "; pass: " + std::string(s.pass ? "true" : "false") + "]\n";
    }
    out += std::string("all_pass = ") + (rep.all_pass() ? "true" : "false") +
           "\n";
    return out;
}

enum class ReportFormat { csv, text };

// writes report.csv and/or report.txt into out_dir; returns written paths
inline std::vector<std::string> emit_report(const ExperimentReport& rep,
                                            const std::string& out_dir,
                                            ReportFormat format) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    const std::filesystem::path dir(out_dir);
    if (format == ReportFormat::csv) {
        const auto p = dir / (rep.kind + "_report.csv");
        detail::atomic_write(p, render_csv(rep));
        written.push_back(p.string());
    } else {
        const auto p = dir / (rep.kind + "_report.txt");
        detail::atomic_write(p, render_text(rep));
        written.push_back(p.string());
    }
    return written;
}

}  // namespace smax
