#include "wordmap.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "wordmap/dataset.hpp"
#include "wordmap/errors.hpp"
#include "wordmap/experiments.hpp"
#include "wordmap/params.hpp"
#include "wordmap/report.hpp"

namespace {

thread_local std::string g_last_error;

wm_status to_status(const wordmap::Error& e) {
    switch (e.kind()) {
        case wordmap::ErrorKind::usage: return WM_ERR_USAGE;
        case wordmap::ErrorKind::data: return WM_ERR_DATA;
        case wordmap::ErrorKind::runtime: return WM_ERR_RUNTIME;
    }
    return WM_ERR_RUNTIME;
}

template <typename Fn>
wm_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return WM_OK;
    } catch (const wordmap::Error& e) {
        g_last_error = e.what();
        return to_status(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return WM_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return WM_ERR_RUNTIME;
    }
}

wm_status usage_error(const char* message) {
    g_last_error = message;
    return WM_ERR_USAGE;
}

}  // namespace

struct wm_params {
    wordmap::Params rep = wordmap::Params::defaults();
};

struct wm_dataset {
    wordmap::Dataset rep;
    std::string dir;
};

struct wm_run {
    wordmap::RunResult rep;
    wordmap::Params params;
    std::string dataset_dir;
};

extern "C" {

const char* wm_version(void) { return "1.0.0"; }

const char* wm_last_error(void) { return g_last_error.c_str(); }

wm_params* wm_params_create(void) { return new wm_params(); }

wm_status wm_params_load(wm_params* params, const char* path) {
    if (!params || !path) return usage_error("wm_params_load: null argument");
    return guarded([&] { params->rep.load_file(path); });
}

wm_status wm_params_set(wm_params* params, const char* key, const char* value) {
    if (!params || !key || !value) return usage_error("wm_params_set: null argument");
    return guarded([&] { params->rep.set(key, value); });
}

uint64_t wm_params_hash(const wm_params* params) {
    return params ? params->rep.hash() : 0;
}

void wm_params_destroy(wm_params* params) { delete params; }

wm_status wm_dataset_open(const char* dir, wm_dataset** out) {
    if (!dir || !out) return usage_error("wm_dataset_open: null argument");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<wm_dataset>();
        handle->rep = wordmap::Dataset::open(dir);
        handle->dir = dir;
        *out = handle.release();
    });
}

int wm_dataset_object_count(const wm_dataset* dataset) {
    return dataset ? static_cast<int>(dataset->rep.objects.size()) : 0;
}

void wm_dataset_close(wm_dataset* dataset) { delete dataset; }

wm_status wm_run_experiment(const wm_dataset* dataset, const wm_params* params,
                            const char* experiment_id, int participants,
                            uint64_t seed, wm_run** out) {
    if (!dataset || !experiment_id || !out)
        return usage_error("wm_run_experiment: null argument");
    *out = nullptr;
    return guarded([&] {
        const wordmap::Params p =
            params ? params->rep : wordmap::Params::defaults();
        const wordmap::ExperimentDesign design =
            wordmap::load_design(dataset->rep.root, experiment_id);
        auto world = wordmap::EncodedDataset::build(dataset->rep, p);
        auto handle = std::make_unique<wm_run>();
        handle->rep = wordmap::run_experiment(design, world, participants, seed);
        handle->params = p;
        handle->dataset_dir = dataset->dir;
        *out = handle.release();
    });
}

int wm_run_participant_count(const wm_run* run) {
    return run ? static_cast<int>(run->rep.participants.size()) : 0;
}

int wm_run_metric_count(const wm_run* run) {
    return run ? static_cast<int>(run->rep.metric_names.size()) : 0;
}

const char* wm_run_metric_name(const wm_run* run, int index) {
    if (!run || index < 0 ||
        index >= static_cast<int>(run->rep.metric_names.size()))
        return nullptr;
    return run->rep.metric_names[static_cast<std::size_t>(index)].c_str();
}

wm_status wm_run_metric(const wm_run* run, const char* name, double* mean,
                        double* sd, double* se) {
    if (!run || !name) return usage_error("wm_run_metric: null argument");
    return guarded([&] {
        std::vector<double> values;
        for (double v : run->rep.metric_values(name))
            if (!std::isnan(v)) values.push_back(v);
        if (values.empty())
            wordmap::throw_usage("metric '" + std::string(name) + "' not present");
        const wordmap::SummaryStats s = wordmap::summarize(values);
        if (mean) *mean = s.mean;
        if (sd) *sd = s.sd;
        if (se) *se = s.se;
    });
}

wm_status wm_run_participant_metric(const wm_run* run, int participant,
                                    const char* name, double* value) {
    if (!run || !name || !value)
        return usage_error("wm_run_participant_metric: null argument");
    return guarded([&] {
        if (participant < 0 ||
            participant >= static_cast<int>(run->rep.participants.size()))
            wordmap::throw_usage("participant index out of range");
        const double v =
            run->rep.participants[static_cast<std::size_t>(participant)].metric(name);
        if (std::isnan(v))
            wordmap::throw_usage("metric '" + std::string(name) +
                                 "' absent for this participant");
        *value = v;
    });
}

wm_status wm_run_write_report(const wm_run* run, const char* out_dir,
                              const char* format) {
    if (!run || !out_dir || !format)
        return usage_error("wm_run_write_report: null argument");
    return guarded([&] {
        wordmap::emit_report(run->rep, run->params, out_dir,
                             wordmap::parse_report_format(format),
                             run->dataset_dir);
    });
}

void wm_run_destroy(wm_run* run) { delete run; }

wm_status wm_generate_descriptors(const char* out_path, int objects,
                                  const char* names_path, int per_object,
                                  int archetypes, double noise, uint64_t seed) {
    if (!out_path) return usage_error("wm_generate_descriptors: null out_path");
    return guarded([&] {
        wordmap::SyntheticDescriptorSpec spec;
        if (names_path) {
            std::ifstream in(names_path);
            if (!in)
                wordmap::throw_data("cannot open names file '" +
                                    std::string(names_path) + "'");
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                const auto begin = line.find_first_not_of(" \t");
                if (begin == std::string::npos) continue;
                const auto end = line.find_last_not_of(" \t");
                line = line.substr(begin, end - begin + 1);
                if (line.empty() || line[0] == '#') continue;
                spec.names.push_back(line);
            }
            if (spec.names.empty())
                wordmap::throw_data("names file '" + std::string(names_path) +
                                    "' lists no objects");
        } else {
            if (objects < 1)
                wordmap::throw_usage("gen-descriptors: need --objects >= 1 or --names");
            for (int i = 0; i < objects; ++i) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "object_%02d", i);
                spec.names.push_back(buf);
            }
        }
        if (per_object > 0) spec.per_object = per_object;
        if (archetypes > 0) spec.archetypes = archetypes;
        if (noise > 0.0) spec.noise = noise;
        spec.seed = seed;
        wordmap::save_descriptors(out_path, wordmap::make_synthetic_descriptors(spec));
    });
}

wm_status wm_validate_schedule(const char* experiment_id, uint64_t seed,
                               const char* dataset_dir) {
    if (!experiment_id) return usage_error("wm_validate_schedule: null experiment id");
    return guarded([&] {
        const wordmap::ExperimentDesign design =
            dataset_dir ? wordmap::load_design(dataset_dir, experiment_id)
                        : wordmap::builtin_design(experiment_id);
        wordmap::Rng rng(wordmap::mix_seed(seed, 1));
        const wordmap::TrialSchedule schedule = wordmap::gen_schedule(design, rng);
        wordmap::validate_schedule(design, schedule);
    });
}

}  // extern "C"
