// Command-line front end. Talks to the core exclusively through the C API.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "wordmap.h"

namespace {

int fail(wm_status status) {
    std::fprintf(stderr, "error: %s\n", wm_last_error());
    return static_cast<int>(status);
}

int cmd_run(const std::string& experiment, int participants, std::uint64_t seed,
            const std::string& params_path, const std::string& dataset_dir,
            const std::string& out_dir, const std::string& format, int threads) {
    (void)threads;
    wm_params* params = wm_params_create();
    wm_status st = WM_OK;
    if (!params_path.empty() && (st = wm_params_load(params, params_path.c_str())) != WM_OK) {
        wm_params_destroy(params);
        return fail(st);
    }

    wm_dataset* dataset = nullptr;
    if ((st = wm_dataset_open(dataset_dir.c_str(), &dataset)) != WM_OK) {
        wm_params_destroy(params);
        return fail(st);
    }

    wm_run* run = nullptr;
    st = wm_run_experiment(dataset, params, experiment.c_str(), participants, seed, &run);
    if (st != WM_OK) {
        wm_dataset_close(dataset);
        wm_params_destroy(params);
        return fail(st);
    }

    st = wm_run_write_report(run, out_dir.c_str(), format.c_str());
    if (st != WM_OK) {
        wm_run_destroy(run);
        wm_dataset_close(dataset);
        wm_params_destroy(params);
        return fail(st);
    }

    std::printf("experiment %s: %d participants\n", experiment.c_str(),
                wm_run_participant_count(run));
    const int metrics = wm_run_metric_count(run);
    for (int i = 0; i < metrics; ++i) {
        const char* name = wm_run_metric_name(run, i);
        double mean = 0, sd = 0, se = 0;
        if (wm_run_metric(run, name, &mean, &sd, &se) == WM_OK)
            std::printf("  %-18s %.4f +/- %.4f (se %.4f)\n", name, mean, sd, se);
    }
    std::printf("report written to %s\n", out_dir.c_str());

    wm_run_destroy(run);
    wm_dataset_close(dataset);
    wm_params_destroy(params);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wordmap: cross-situational word-learning simulator"};
    app.require_subcommand(1);

    // run
    std::string experiment, params_path, dataset_dir, out_dir = "out", format = "text";
    int participants = 0;
    std::uint64_t seed = 42;
    int threads = 0;
    CLI::App* run = app.add_subcommand("run", "train and test simulated participants");
    run->add_option("--experiment", experiment,
                    "experiment id (exp1_2x2, exp1_3x3, exp1_4x4, exp2..exp6)")
        ->required();
    run->add_option("--participants", participants,
                    "participant count (0 = design default)");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--params", params_path, "key=value parameter file");
    run->add_option("--dataset", dataset_dir, "dataset directory")->required();
    run->add_option("--out", out_dir, "output directory for reports");
    run->add_option("--format", format, "report format: csv|json|text")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    run->add_option("--threads", threads, "worker threads (0 = hardware)");

    // gen-descriptors
    bool synthetic = false;
    int objects = 0, per_object = 0, archetypes = 0;
    double noise = 0.0;
    std::string names_path, gen_out;
    std::uint64_t gen_seed = 1234567;
    CLI::App* gen = app.add_subcommand("gen-descriptors",
                                       "write a synthetic visual descriptor file");
    gen->add_flag("--synthetic", synthetic, "generate synthetic descriptors");
    gen->add_option("--objects", objects, "number of anonymous objects");
    gen->add_option("--names", names_path, "file listing object names (one per line)");
    gen->add_option("--per-object", per_object, "descriptors per object");
    gen->add_option("--archetypes", archetypes, "shared archetype pool size");
    gen->add_option("--noise", noise, "descriptor noise sigma");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output file")->required();

    // validate-schedule
    std::string v_experiment, v_dataset;
    std::uint64_t v_seed = 0;
    CLI::App* validate = app.add_subcommand(
        "validate-schedule", "generate a schedule and recheck its constraints");
    validate->add_option("--experiment", v_experiment, "experiment id")->required();
    validate->add_option("--seed", v_seed, "schedule seed");
    validate->add_option("--dataset", v_dataset,
                         "dataset directory (for design overrides)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;  // usage error
    }

    if (run->parsed())
        return cmd_run(experiment, participants, seed, params_path, dataset_dir,
                       out_dir, format, threads);

    if (gen->parsed()) {
        if (!synthetic) {
            std::fprintf(stderr, "error: only --synthetic generation is supported\n");
            return 1;
        }
        const wm_status st = wm_generate_descriptors(
            gen_out.c_str(), objects, names_path.empty() ? nullptr : names_path.c_str(),
            per_object, archetypes, noise, gen_seed);
        if (st != WM_OK) return fail(st);
        std::printf("descriptors written to %s\n", gen_out.c_str());
        return 0;
    }

    if (validate->parsed()) {
        const wm_status st = wm_validate_schedule(
            v_experiment.c_str(), v_seed, v_dataset.empty() ? nullptr : v_dataset.c_str());
        if (st != WM_OK) return fail(st);
        std::printf("schedule for %s (seed %llu) satisfies all design constraints\n",
                    v_experiment.c_str(), static_cast<unsigned long long>(v_seed));
        return 0;
    }
    return 1;
}
