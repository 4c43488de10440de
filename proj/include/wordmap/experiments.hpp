#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordmap/pipeline.hpp"

namespace wordmap {

// Word-learning experiment designs. exp1_* train one-to-one pairs at three
// ambiguity levels; exp2-4 add double and noise words; exp5 is the 1x5
// test-on-every-trial protocol; exp6 alternates two word lists sharing an
// ambiguous label and probes context-driven disambiguation.
struct ExperimentDesign {
    std::string id;
    std::string family;  // exp1 .. exp6, derived from id
    int participants = 0;
    int pair_occurrences = 6;
    int test_choices = 4;

    int condition_size = 0;                        // exp1: words/referents per trial
    std::vector<std::string> words;                // exp1, exp5
    std::vector<std::string> single_words;         // exp2-4
    std::vector<std::string> double_words;         // exp2-4
    std::vector<std::string> double_second_referents;  // exp2-4, parallel
    std::vector<std::string> noise_words;          // exp2

    int cycles = 0;              // exp5 (5), exp6 (6)
    int referents_per_trial = 0; // exp5/exp6 training trials (5)
    int trials_per_cycle = 0;    // exp6 (14)
    int induction_trials = 0;    // exp6 (6)
    int induction_choices = 4;   // exp6 induction trials (1x4)
    std::vector<std::string> list_a, list_b;  // exp6, ambiguous word excluded
    std::string ambiguous_word, referent_a, referent_b;  // exp6

    void validate() const;
    // Every object name the design's trials and tests can reference.
    std::vector<std::string> referent_objects() const;
    std::string referent_of(std::string_view word) const;  // same-named object

    void write(std::ostream& out) const;
    std::string to_string() const;
    static ExperimentDesign parse(std::istream& in, std::string_view source);
};

const std::vector<std::string>& design_ids();
ExperimentDesign builtin_design(std::string_view id);
// designs/<id>.design under the dataset root overrides the builtin one.
ExperimentDesign load_design(const std::filesystem::path& dataset_root,
                             std::string_view id);
// Union of referent objects over all builtin designs (the shipped object set).
std::vector<std::string> experiment_object_names();

struct TestItem {
    std::string word;
    std::vector<std::string> candidates;
    std::vector<std::string> correct;  // 1 or 2 entries
};

struct Exp6Condition {
    std::string name;  // e.g. "4a+2b"
    std::vector<Stimulus> induction;
    TestItem al_test;
};

struct TrialSchedule {
    std::vector<Stimulus> trials;
    std::vector<int> trial_cycle;             // exp5/exp6
    std::vector<std::string> trial_word;      // exp5
    std::vector<std::string> trial_correct;   // exp5
    std::vector<TestItem> tests;              // exp1-4
    // exp4: double word -> (early referent, late referent)
    std::map<std::string, std::pair<std::string, std::string>> early_late;
    std::vector<Exp6Condition> conditions;    // exp6
};

TrialSchedule gen_schedule(const ExperimentDesign& design, Rng& rng);

// Recounts every constraint from scratch; throws a data error describing the
// first violation. Deliberately independent of the generator.
void validate_schedule(const ExperimentDesign& design, const TrialSchedule& schedule);

enum class RankOutcome { Single, Double, Either, Miss };

// |correct| == 1: Single iff the correct referent is ranked first.
// |correct| == 2: Double iff the top two are exactly the correct pair (either
// order); Either iff rank 1 is correct and rank 2 is not; Miss otherwise.
RankOutcome score_rank_test(std::span<const std::string> ranked,
                            std::span<const std::string> correct);

struct ConditionalScores {
    double acc_after_right = 0.0;
    double acc_after_wrong = 0.0;
    bool right_defined = false;
    bool wrong_defined = false;
    std::vector<double> per_cycle;
};

// Partitions cycle >= 2 trials of each word by whether the previous cycle's
// choice for that word was correct.
ConditionalScores score_conditional(std::span<const std::string> choices,
                                    const ExperimentDesign& design,
                                    const TrialSchedule& schedule);

struct RankedRecord {
    std::string word;
    std::vector<std::string> ranked;
    std::vector<std::string> correct;
    RankOutcome outcome = RankOutcome::Miss;
};

struct OrderEffect {
    double early_first = 0.0;
    double late_first = 0.0;
    bool any_double = false;
};

// Among Double outcomes, the per-participant rates (relative to the number of
// double words) of ranking the early vs the late referent first.
OrderEffect score_order_effect(std::span<const RankedRecord> records,
                               const TrialSchedule& schedule,
                               std::size_t double_word_count);

struct ParticipantResult {
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> metrics;  // fixed per-design order
    std::vector<RankedRecord> records;

    double metric(std::string_view name) const;  // NaN when absent
};

ParticipantResult run_participant(const ExperimentDesign& design,
                                  const std::shared_ptr<const EncodedDataset>& world,
                                  std::uint64_t seed);

struct RunResult {
    ExperimentDesign design;
    std::uint64_t master_seed = 0;
    std::vector<ParticipantResult> participants;
    std::vector<std::string> metric_names;
    std::size_t auditory_clusters = 0;
    std::size_t visual_clusters = 0;

    // Aligned with participants; absent metrics appear as NaN.
    std::vector<double> metric_values(std::string_view name) const;
};

// participants <= 0 uses the design default. Participant i runs with seed
// mix_seed(master_seed, i); runs are embarrassingly parallel and the result is
// independent of the thread count.
RunResult run_experiment(const ExperimentDesign& design,
                         std::shared_ptr<const EncodedDataset> world,
                         int participants, std::uint64_t master_seed,
                         int threads = 0);

// Chance level of a metric under the design (NaN when not applicable).
double metric_chance(const ExperimentDesign& design, std::string_view metric);

}  // namespace wordmap
