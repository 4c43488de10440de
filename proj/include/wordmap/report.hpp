#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wordmap/experiments.hpp"
#include "wordmap/stats.hpp"

namespace wordmap {

enum class ReportFormat { csv, json, text };
ReportFormat parse_report_format(std::string_view name);  // csv|json|text

struct AggregateRow {
    std::string metric;
    SummaryStats stats;
    double chance = 0.0;
    bool has_chance = false;
    TTestResult t_vs_chance;
    bool has_t = false;
};

struct PairedRow {
    std::string name;  // e.g. "single_vs_both"
    double mean_diff = 0.0;
    TTestResult t;
    bool ok = false;
};

struct ReportTables {
    std::vector<AggregateRow> aggregates;
    std::vector<PairedRow> paired;
};

ReportTables compute_tables(const RunResult& run);

// Writes <id>_participants.csv / <id>_aggregate.csv / <id>_paired.csv /
// <id>_manifest.json (csv), or <id>_report.json (json), or <id>_report.txt +
// manifest (text). Byte-stable for fixed inputs.
void emit_report(const RunResult& run, const Params& params,
                 const std::filesystem::path& out_dir, ReportFormat format,
                 std::string_view dataset_path);

// The json-format report as a string (also what <id>_report.json contains).
std::string report_json_text(const RunResult& run, const Params& params,
                             std::string_view dataset_path);

}  // namespace wordmap
