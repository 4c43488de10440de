#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "wordmap/errors.hpp"
#include "wordmap/experiments.hpp"

namespace wordmap {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

RankOutcome score_rank_test(std::span<const std::string> ranked,
                            std::span<const std::string> correct) {
    if (ranked.size() != 4) throw_usage("score_rank_test: expected 4 ranked referents");
    if (correct.size() != 1 && correct.size() != 2)
        throw_usage("score_rank_test: correct set must have 1 or 2 referents");
    const std::set<std::string> ranked_set(ranked.begin(), ranked.end());
    if (ranked_set.size() != ranked.size())
        throw_usage("score_rank_test: ranked list contains duplicates");
    for (const std::string& c : correct)
        if (!ranked_set.count(c))
            throw_usage("score_rank_test: correct referent '" + c + "' not in ranking");

    if (correct.size() == 1)
        return ranked[0] == correct[0] ? RankOutcome::Single : RankOutcome::Miss;

    const bool first_correct = ranked[0] == correct[0] || ranked[0] == correct[1];
    const bool second_correct = ranked[1] == correct[0] || ranked[1] == correct[1];
    if (first_correct && second_correct) return RankOutcome::Double;
    if (first_correct) return RankOutcome::Either;
    return RankOutcome::Miss;
}

ConditionalScores score_conditional(std::span<const std::string> choices,
                                    const ExperimentDesign& design,
                                    const TrialSchedule& schedule) {
    if (choices.size() != schedule.trials.size())
        throw_usage("score_conditional: one choice per trial required");
    const std::size_t per_cycle = design.words.size();
    const int cycles = design.cycles;

    ConditionalScores out;
    out.per_cycle.assign(static_cast<std::size_t>(cycles), 0.0);

    // trial index of each word in each cycle
    std::map<std::string, std::vector<std::size_t>> word_trials;
    for (std::size_t t = 0; t < schedule.trials.size(); ++t)
        word_trials[schedule.trial_word[t]].push_back(t);

    for (std::size_t t = 0; t < schedule.trials.size(); ++t) {
        if (choices[t] == schedule.trial_correct[t])
            out.per_cycle[static_cast<std::size_t>(schedule.trial_cycle[t])] += 1.0;
    }
    for (double& v : out.per_cycle) v /= static_cast<double>(per_cycle);

    double right_sum = 0.0, wrong_sum = 0.0;
    std::size_t right_n = 0, wrong_n = 0;
    for (const auto& [word, trials] : word_trials) {
        for (std::size_t c = 1; c < trials.size(); ++c) {
            const std::size_t prev = trials[c - 1];
            const std::size_t cur = trials[c];
            const bool prev_right = choices[prev] == schedule.trial_correct[prev];
            const bool cur_right = choices[cur] == schedule.trial_correct[cur];
            if (prev_right) {
                right_sum += cur_right ? 1.0 : 0.0;
                ++right_n;
            } else {
                wrong_sum += cur_right ? 1.0 : 0.0;
                ++wrong_n;
            }
        }
    }
    if (right_n > 0) {
        out.acc_after_right = right_sum / static_cast<double>(right_n);
        out.right_defined = true;
    }
    if (wrong_n > 0) {
        out.acc_after_wrong = wrong_sum / static_cast<double>(wrong_n);
        out.wrong_defined = true;
    }
    return out;
}

OrderEffect score_order_effect(std::span<const RankedRecord> records,
                               const TrialSchedule& schedule,
                               std::size_t double_word_count) {
    OrderEffect out;
    if (double_word_count == 0) return out;
    int early = 0, late = 0;
    for (const RankedRecord& rec : records) {
        if (rec.correct.size() != 2 || rec.outcome != RankOutcome::Double) continue;
        out.any_double = true;
        const auto it = schedule.early_late.find(rec.word);
        if (it == schedule.early_late.end())
            throw_usage("score_order_effect: no early/late record for '" + rec.word + "'");
        if (rec.ranked[0] == it->second.first) ++early;
        else if (rec.ranked[0] == it->second.second) ++late;
    }
    out.early_first = static_cast<double>(early) / static_cast<double>(double_word_count);
    out.late_first = static_cast<double>(late) / static_cast<double>(double_word_count);
    return out;
}

double ParticipantResult::metric(std::string_view name) const {
    for (const auto& [k, v] : metrics)
        if (k == name) return v;
    return kNaN;
}

namespace {

// Context advances on test trials exactly as on training trials; scoring
// itself leaves the maps untouched.
RankedRecord run_test_item(ModelState& state, const TestItem& item) {
    state.advance_context(Stimulus{{item.word}, item.candidates});
    RankedRecord rec;
    rec.word = item.word;
    rec.correct = item.correct;
    rec.ranked = state.rank_candidates(item.word, item.candidates);
    rec.outcome = score_rank_test(rec.ranked, rec.correct);
    return rec;
}

ParticipantResult run_exp1(const TrialSchedule& sched, ModelState& state) {
    ParticipantResult out;
    for (const Stimulus& trial : sched.trials) state.train_trial(trial);
    int hits = 0;
    for (const TestItem& item : sched.tests) {
        RankedRecord rec = run_test_item(state, item);
        if (rec.outcome == RankOutcome::Single) ++hits;
        out.records.push_back(std::move(rec));
    }
    out.metrics.emplace_back(
        "accuracy", static_cast<double>(hits) / static_cast<double>(sched.tests.size()));
    return out;
}

ParticipantResult run_exp2_3_4(const ExperimentDesign& d, const TrialSchedule& sched,
                               ModelState& state) {
    ParticipantResult out;
    for (const Stimulus& trial : sched.trials) state.train_trial(trial);

    int single_hits = 0, either_hits = 0, both_hits = 0;
    for (const TestItem& item : sched.tests) {
        RankedRecord rec = run_test_item(state, item);
        if (rec.correct.size() == 1) {
            if (rec.outcome == RankOutcome::Single) ++single_hits;
        } else {
            if (rec.outcome == RankOutcome::Double) ++both_hits;
            if (rec.outcome == RankOutcome::Double || rec.outcome == RankOutcome::Either)
                ++either_hits;
        }
        out.records.push_back(std::move(rec));
    }
    const double n_single = static_cast<double>(d.single_words.size());
    const double n_double = static_cast<double>(d.double_words.size());
    out.metrics.emplace_back("single", single_hits / n_single);
    out.metrics.emplace_back("either", either_hits / n_double);
    out.metrics.emplace_back("both", both_hits / n_double);
    if (d.family == "exp4") {
        const OrderEffect oe =
            score_order_effect(out.records, sched, d.double_words.size());
        out.metrics.emplace_back("early_first", oe.early_first);
        out.metrics.emplace_back("late_first", oe.late_first);
    }
    return out;
}

ParticipantResult run_exp5(const ExperimentDesign& d, const TrialSchedule& sched,
                           ModelState& state) {
    ParticipantResult out;
    std::vector<std::string> choices;
    std::vector<int> created;
    choices.reserve(sched.trials.size());
    for (const Stimulus& trial : sched.trials) {
        const ModelState::RecordedTrial rec = state.train_trial_recorded(trial);
        choices.push_back(rec.choice);
        created.push_back(rec.created);
    }
    const ConditionalScores cs = score_conditional(choices, d, sched);
    for (int c = 0; c < d.cycles; ++c) {
        out.metrics.emplace_back("cycle" + std::to_string(c + 1) + "_accuracy",
                                 cs.per_cycle[static_cast<std::size_t>(c)]);
    }
    out.metrics.emplace_back("acc_after_right",
                             cs.right_defined ? cs.acc_after_right : kNaN);
    out.metrics.emplace_back("acc_after_wrong",
                             cs.wrong_defined ? cs.acc_after_wrong : kNaN);
    for (int c = 0; c < d.cycles; ++c) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t t = 0; t < sched.trials.size(); ++t) {
            if (sched.trial_cycle[t] == c) {
                sum += created[t];
                ++n;
            }
        }
        out.metrics.emplace_back("nodes_cycle" + std::to_string(c + 1),
                                 n > 0 ? sum / n : kNaN);
    }
    return out;
}

ParticipantResult run_exp6(const TrialSchedule& sched, ModelState& state,
                           std::uint64_t seed) {
    ParticipantResult out;
    for (const Stimulus& trial : sched.trials) state.train_trial(trial);

    std::map<std::string, double> acc;
    for (std::size_t c = 0; c < sched.conditions.size(); ++c) {
        const Exp6Condition& cond = sched.conditions[c];
        ModelState probe = state;  // condition runs on an isolated branch
        probe.reseed(mix_seed(seed, 1000 + c));
        for (const Stimulus& trial : cond.induction) probe.train_trial(trial);
        RankedRecord rec = run_test_item(probe, cond.al_test);
        acc[cond.name] = rec.outcome == RankOutcome::Single ? 1.0 : 0.0;
        out.records.push_back(std::move(rec));
    }
    auto metric_name = [](const std::string& cond) {
        std::string name = "acc_" + cond;
        name.erase(std::remove(name.begin(), name.end(), '+'), name.end());
        return name;  // e.g. acc_3a3b
    };
    for (const char* cond : {"3a+3b", "3b+3a", "4a+2b", "4b+2a", "5a+1b", "5b+1a"})
        out.metrics.emplace_back(metric_name(cond), acc.at(cond));
    out.metrics.emplace_back("acc_3p3", (acc.at("3a+3b") + acc.at("3b+3a")) / 2.0);
    out.metrics.emplace_back("acc_4p2", (acc.at("4a+2b") + acc.at("4b+2a")) / 2.0);
    out.metrics.emplace_back("acc_5p1", (acc.at("5a+1b") + acc.at("5b+1a")) / 2.0);
    return out;
}

}  // namespace

ParticipantResult run_participant(const ExperimentDesign& design,
                                  const std::shared_ptr<const EncodedDataset>& world,
                                  std::uint64_t seed) {
    Rng schedule_rng(mix_seed(seed, 1));
    const TrialSchedule sched = gen_schedule(design, schedule_rng);
    ModelState state(world, mix_seed(seed, 2));

    ParticipantResult result;
    if (design.family == "exp1") result = run_exp1(sched, state);
    else if (design.family == "exp2" || design.family == "exp3" ||
             design.family == "exp4")
        result = run_exp2_3_4(design, sched, state);
    else if (design.family == "exp5") result = run_exp5(design, sched, state);
    else if (design.family == "exp6") result = run_exp6(sched, state, seed);
    else throw_usage("run_participant: unknown family '" + design.family + "'");
    result.seed = seed;
    return result;
}

std::vector<double> RunResult::metric_values(std::string_view name) const {
    std::vector<double> out;
    out.reserve(participants.size());
    for (const ParticipantResult& p : participants) out.push_back(p.metric(name));
    return out;
}

RunResult run_experiment(const ExperimentDesign& design,
                         std::shared_ptr<const EncodedDataset> world,
                         int participants, std::uint64_t master_seed, int threads) {
    design.validate();
    if (participants <= 0) participants = design.participants;
    if (participants < 1) throw_usage("run_experiment: participants must be >= 1");

    RunResult result;
    result.design = design;
    result.master_seed = master_seed;
    result.participants.resize(static_cast<std::size_t>(participants));
    result.auditory_clusters = world->auditory_codebook().size();
    result.visual_clusters = world->visual_codebook().size();

    const unsigned hw = std::thread::hardware_concurrency();
    std::size_t worker_count = threads > 0 ? static_cast<std::size_t>(threads)
                                           : std::max(1u, hw);
    worker_count = std::min(worker_count, static_cast<std::size_t>(participants));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= result.participants.size()) break;
            try {
                result.participants[i] =
                    run_participant(design, world, mix_seed(master_seed, i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                break;
            }
        }
    };
    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (std::size_t i = 0; i < worker_count; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (const auto& [name, value] : result.participants.front().metrics)
        result.metric_names.push_back(name);
    return result;
}

double metric_chance(const ExperimentDesign& design, std::string_view metric) {
    const double k = static_cast<double>(design.test_choices);
    if (metric == "accuracy" || metric == "single") return 1.0 / k;
    if (metric == "either") return 2.0 / k;
    if (metric == "both") return 2.0 / (k * (k - 1.0));
    if (metric.rfind("acc_", 0) == 0) {
        if (design.family == "exp5") return 1.0 / design.referents_per_trial;
        if (design.family == "exp6") return 1.0 / k;
    }
    if (metric.rfind("cycle", 0) == 0 && design.family == "exp5")
        return 1.0 / design.referents_per_trial;
    return kNaN;
}

}  // namespace wordmap
