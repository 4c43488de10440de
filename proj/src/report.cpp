#include "wordmap/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wordmap/errors.hpp"

namespace wordmap {

namespace {

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string csv_value(double v) { return std::isnan(v) ? std::string() : fmt9(v); }

std::vector<double> finite_only(const std::vector<double>& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values)
        if (!std::isnan(v)) out.push_back(v);
    return out;
}

// Within-design paired comparisons reported alongside the aggregates.
std::vector<std::pair<std::string, std::pair<std::string, std::string>>>
paired_specs(const ExperimentDesign& d) {
    if (d.family == "exp2" || d.family == "exp3")
        return {{"single_vs_both", {"single", "both"}}};
    if (d.family == "exp4")
        return {{"single_vs_both", {"single", "both"}},
                {"early_vs_late", {"early_first", "late_first"}}};
    if (d.family == "exp6")
        return {{"acc_3p3_vs_4p2", {"acc_3p3", "acc_4p2"}},
                {"acc_4p2_vs_5p1", {"acc_4p2", "acc_5p1"}}};
    return {};
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    if (name == "text") return ReportFormat::text;
    throw_usage("unknown report format '" + std::string(name) +
                "' (expected csv, json or text)");
}

ReportTables compute_tables(const RunResult& run) {
    if (run.participants.empty()) throw_usage("report: no participant results");
    ReportTables tables;
    for (const std::string& metric : run.metric_names) {
        AggregateRow row;
        row.metric = metric;
        const std::vector<double> values = finite_only(run.metric_values(metric));
        if (values.empty()) continue;
        row.stats = summarize(values);
        const double chance = metric_chance(run.design, metric);
        if (!std::isnan(chance)) {
            row.chance = chance;
            row.has_chance = true;
            if (values.size() >= 2 && row.stats.sd > 0.0) {
                row.t_vs_chance = one_sample_t(values, chance);
                row.has_t = true;
            }
        }
        tables.aggregates.push_back(std::move(row));
    }
    for (const auto& [name, metrics] : paired_specs(run.design)) {
        PairedRow row;
        row.name = name;
        const std::vector<double> a = run.metric_values(metrics.first);
        const std::vector<double> b = run.metric_values(metrics.second);
        std::vector<double> da, db;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::isnan(a[i]) || std::isnan(b[i])) continue;
            da.push_back(a[i]);
            db.push_back(b[i]);
        }
        if (da.size() >= 2) {
            row.mean_diff = summarize(da).mean - summarize(db).mean;
            try {
                row.t = paired_t(da, db);
                row.ok = true;
            } catch (const Error&) {
                row.ok = false;  // degenerate differences
            }
        }
        tables.paired.push_back(std::move(row));
    }
    return tables;
}

namespace {

nlohmann::ordered_json manifest_json(const RunResult& run, const Params& params,
                                     std::string_view dataset_path) {
    nlohmann::ordered_json m;
    m["design"] = run.design.id;
    m["participants"] = run.participants.size();
    m["seed"] = run.master_seed;
    m["params_hash"] = params.hash_hex();
    m["dataset"] = std::string(dataset_path);
    m["auditory_clusters"] = run.auditory_clusters;
    m["visual_clusters"] = run.visual_clusters;
    m["generator"] = "wordmap 1.0.0";
    return m;
}

nlohmann::ordered_json ttest_json(const TTestResult& t) {
    nlohmann::ordered_json j;
    j["t"] = t.t;
    j["df"] = t.df;
    j["p_two_sided"] = t.p_two_sided;
    j["p_one_sided"] = t.p_one_sided;
    j["significant_1pct"] = t.significant_1pct;
    j["significant_5pct"] = t.significant_5pct;
    return j;
}

nlohmann::ordered_json report_json(const RunResult& run, const Params& params,
                                   std::string_view dataset_path) {
    const ReportTables tables = compute_tables(run);
    nlohmann::ordered_json root;
    root["manifest"] = manifest_json(run, params, dataset_path);

    nlohmann::ordered_json parts = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        const ParticipantResult& p = run.participants[i];
        nlohmann::ordered_json row;
        row["participant"] = i;
        row["seed"] = p.seed;
        nlohmann::ordered_json metrics;
        for (const auto& [name, value] : p.metrics) {
            if (std::isnan(value)) metrics[name] = nullptr;
            else metrics[name] = value;
        }
        row["metrics"] = metrics;
        parts.push_back(std::move(row));
    }
    root["participants"] = parts;

    nlohmann::ordered_json aggs = nlohmann::ordered_json::array();
    for (const AggregateRow& row : tables.aggregates) {
        nlohmann::ordered_json j;
        j["metric"] = row.metric;
        j["n"] = row.stats.n;
        j["mean"] = row.stats.mean;
        j["sd"] = row.stats.sd;
        j["se"] = row.stats.se;
        if (row.has_chance) j["chance"] = row.chance;
        if (row.has_t) j["t_vs_chance"] = ttest_json(row.t_vs_chance);
        aggs.push_back(std::move(j));
    }
    root["aggregates"] = aggs;

    nlohmann::ordered_json paired = nlohmann::ordered_json::array();
    for (const PairedRow& row : tables.paired) {
        nlohmann::ordered_json j;
        j["name"] = row.name;
        j["mean_diff"] = row.mean_diff;
        if (row.ok) j["test"] = ttest_json(row.t);
        paired.push_back(std::move(j));
    }
    root["paired"] = paired;
    return root;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_runtime("cannot write report file '" + path.string() + "'");
    out << content;
    if (!out) throw_runtime("write failed for '" + path.string() + "'");
}

std::string participants_csv(const RunResult& run) {
    std::ostringstream out;
    out << "participant,seed";
    for (const std::string& name : run.metric_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        const ParticipantResult& p = run.participants[i];
        out << i << ',' << p.seed;
        for (const std::string& name : run.metric_names)
            out << ',' << csv_value(p.metric(name));
        out << '\n';
    }
    return out.str();
}

std::string aggregate_csv(const RunResult& run, const ReportTables& tables) {
    (void)run;
    std::ostringstream out;
    out << "metric,n,mean,sd,se,chance,t,df,p_two_sided,p_one_sided,significant_1pct,"
           "significant_5pct\n";
    for (const AggregateRow& row : tables.aggregates) {
        out << row.metric << ',' << row.stats.n << ',' << fmt9(row.stats.mean) << ','
            << fmt9(row.stats.sd) << ',' << fmt9(row.stats.se) << ','
            << (row.has_chance ? fmt9(row.chance) : std::string());
        if (row.has_t) {
            out << ',' << fmt9(row.t_vs_chance.t) << ',' << fmt9(row.t_vs_chance.df)
                << ',' << fmt9(row.t_vs_chance.p_two_sided) << ','
                << fmt9(row.t_vs_chance.p_one_sided) << ','
                << (row.t_vs_chance.significant_1pct ? "true" : "false") << ','
                << (row.t_vs_chance.significant_5pct ? "true" : "false");
        } else {
            out << ",,,,,,";
        }
        out << '\n';
    }
    return out.str();
}

std::string paired_csv(const ReportTables& tables) {
    std::ostringstream out;
    out << "name,mean_diff,t,df,p_two_sided,p_one_sided,significant_1pct,"
           "significant_5pct\n";
    for (const PairedRow& row : tables.paired) {
        out << row.name << ',' << fmt9(row.mean_diff);
        if (row.ok) {
            out << ',' << fmt9(row.t.t) << ',' << fmt9(row.t.df) << ','
                << fmt9(row.t.p_two_sided) << ',' << fmt9(row.t.p_one_sided) << ','
                << (row.t.significant_1pct ? "true" : "false") << ','
                << (row.t.significant_5pct ? "true" : "false");
        } else {
            out << ",,,,,,";
        }
        out << '\n';
    }
    return out.str();
}

std::string text_report(const RunResult& run, const ReportTables& tables,
                        const Params& params, std::string_view dataset_path) {
    std::ostringstream out;
    out << "experiment " << run.design.id << "  participants "
        << run.participants.size() << "  seed " << run.master_seed << "\n";
    out << "params_hash " << params.hash_hex() << "  dataset " << dataset_path << "\n";
    out << "codebooks: auditory " << run.auditory_clusters << " clusters, visual "
        << run.visual_clusters << " clusters\n\n";
    out << "aggregates (mean +/- sd, se; chance; t-test vs chance):\n";
    for (const AggregateRow& row : tables.aggregates) {
        char line[256];
        std::snprintf(line, sizeof(line), "  %-18s %.4f +/- %.4f (se %.4f)",
                      row.metric.c_str(), row.stats.mean, row.stats.sd, row.stats.se);
        out << line;
        if (row.has_chance) {
            std::snprintf(line, sizeof(line), "  chance %.4f", row.chance);
            out << line;
        }
        if (row.has_t) {
            std::snprintf(line, sizeof(line), "  t(%g)=%.4f p=%.3g%s", row.t_vs_chance.df,
                          row.t_vs_chance.t, row.t_vs_chance.p_two_sided,
                          row.t_vs_chance.significant_1pct ? " **" : "");
            out << line;
        }
        out << '\n';
    }
    if (!tables.paired.empty()) {
        out << "\npaired tests:\n";
        for (const PairedRow& row : tables.paired) {
            char line[256];
            std::snprintf(line, sizeof(line), "  %-16s diff %.4f", row.name.c_str(),
                          row.mean_diff);
            out << line;
            if (row.ok) {
                std::snprintf(line, sizeof(line), "  t(%g)=%.4f p=%.3g%s", row.t.df,
                              row.t.t, row.t.p_two_sided,
                              row.t.significant_1pct ? " **" : "");
                out << line;
            }
            out << '\n';
        }
    }
    out << "\nper-participant metrics:\n";
    out << participants_csv(run);
    return out.str();
}

}  // namespace

std::string report_json_text(const RunResult& run, const Params& params,
                             std::string_view dataset_path) {
    return report_json(run, params, dataset_path).dump(2) + "\n";
}

void emit_report(const RunResult& run, const Params& params,
                 const std::filesystem::path& out_dir, ReportFormat format,
                 std::string_view dataset_path) {
    if (run.participants.empty()) throw_usage("emit_report: no participant results");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec && !std::filesystem::is_directory(out_dir))
        throw_runtime("cannot create output directory '" + out_dir.string() + "'");

    const std::string base = run.design.id;
    const ReportTables tables = compute_tables(run);
    const std::string manifest =
        manifest_json(run, params, dataset_path).dump(2) + "\n";

    switch (format) {
        case ReportFormat::csv:
            write_file(out_dir / (base + "_participants.csv"), participants_csv(run));
            write_file(out_dir / (base + "_aggregate.csv"), aggregate_csv(run, tables));
            write_file(out_dir / (base + "_paired.csv"), paired_csv(tables));
            write_file(out_dir / (base + "_manifest.json"), manifest);
            break;
        case ReportFormat::json:
            write_file(out_dir / (base + "_report.json"),
                       report_json_text(run, params, dataset_path));
            break;
        case ReportFormat::text:
            write_file(out_dir / (base + "_report.txt"),
                       text_report(run, tables, params, dataset_path));
            write_file(out_dir / (base + "_manifest.json"), manifest);
            break;
    }
}

}  // namespace wordmap
