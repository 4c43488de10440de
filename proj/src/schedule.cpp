#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "wordmap/errors.hpp"
#include "wordmap/experiments.hpp"

namespace wordmap {

namespace {

// Places word tokens into trials with fixed per-trial capacities such that no
// trial holds the same word twice. Randomized greedy with restart.
std::vector<std::vector<int>> place_tokens(const std::vector<int>& tokens,
                                           const std::vector<int>& capacities,
                                           Rng& rng, const char* what) {
    const std::size_t trial_count = capacities.size();
    const long total_cap = std::accumulate(capacities.begin(), capacities.end(), 0L);
    if (static_cast<long>(tokens.size()) != total_cap)
        throw_data(std::string(what) + ": token count " + std::to_string(tokens.size()) +
                   " does not match capacity " + std::to_string(total_cap));

    std::map<int, int> multiplicity;
    for (int w : tokens) ++multiplicity[w];

    const int max_attempts = 500;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::pair<int, int>> words(multiplicity.begin(), multiplicity.end());
        rng.shuffle(words);
        std::stable_sort(words.begin(), words.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });

        std::vector<std::vector<int>> assigned(trial_count);
        std::vector<int> remaining = capacities;
        bool ok = true;
        for (const auto& [word, count] : words) {
            for (int k = 0; k < count; ++k) {
                std::vector<std::size_t> candidates;
                for (std::size_t t = 0; t < trial_count; ++t) {
                    if (remaining[t] <= 0) continue;
                    if (std::find(assigned[t].begin(), assigned[t].end(), word) !=
                        assigned[t].end())
                        continue;
                    candidates.push_back(t);
                }
                if (candidates.empty()) {
                    ok = false;
                    break;
                }
                const std::size_t t = candidates[rng.next_index(candidates.size())];
                assigned[t].push_back(word);
                --remaining[t];
            }
            if (!ok) break;
        }
        if (ok) return assigned;
    }
    throw_data(std::string(what) + ": could not satisfy schedule constraints after " +
               std::to_string(max_attempts) + " attempts");
}

std::vector<std::string> sample_others(const std::vector<std::string>& pool,
                                       const std::set<std::string>& exclude,
                                       std::size_t k, Rng& rng) {
    std::vector<std::string> eligible;
    for (const std::string& p : pool)
        if (!exclude.count(p)) eligible.push_back(p);
    if (eligible.size() < k)
        throw_data("schedule: not enough referents to draw " + std::to_string(k) +
                   " foils");
    const auto idx = rng.sample_indices(eligible.size(), k);
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i : idx) out.push_back(eligible[i]);
    return out;
}

TrialSchedule gen_exp1(const ExperimentDesign& d, Rng& rng) {
    const int n = d.condition_size;
    const std::size_t word_count = d.words.size();
    const std::size_t trial_count =
        word_count * static_cast<std::size_t>(d.pair_occurrences) /
        static_cast<std::size_t>(n);

    std::vector<int> tokens;
    for (std::size_t w = 0; w < word_count; ++w)
        tokens.insert(tokens.end(), static_cast<std::size_t>(d.pair_occurrences),
                      static_cast<int>(w));
    auto assigned =
        place_tokens(tokens, std::vector<int>(trial_count, n), rng, "exp1 schedule");
    rng.shuffle(assigned);

    TrialSchedule sched;
    for (const auto& trial_words : assigned) {
        Stimulus s;
        for (int w : trial_words) s.words.push_back(d.words[static_cast<std::size_t>(w)]);
        rng.shuffle(s.words);
        s.referents = s.words;  // a referent is present iff its label is present
        rng.shuffle(s.referents);
        sched.trials.push_back(std::move(s));
    }

    for (const std::string& word : d.words) {
        TestItem item;
        item.word = word;
        item.correct = {word};
        item.candidates = {word};
        for (std::string& foil :
             sample_others(d.words, {word}, static_cast<std::size_t>(d.test_choices - 1),
                           rng))
            item.candidates.push_back(std::move(foil));
        rng.shuffle(item.candidates);
        sched.tests.push_back(std::move(item));
    }
    rng.shuffle(sched.tests);
    return sched;
}

// Trial templates for the 27-trial mixed design: (single, double, noise) word
// counts per trial.
struct TrialTemplate {
    int singles, doubles, noises, count;
};
constexpr TrialTemplate kExp2Mix[] = {{4, 0, 0, 2}, {2, 1, 1, 14}, {0, 2, 2, 11}};

TrialSchedule gen_exp2(const ExperimentDesign& d, Rng& rng) {
    std::vector<int> cap_single, cap_double, cap_noise;
    for (const TrialTemplate& t : kExp2Mix) {
        for (int i = 0; i < t.count; ++i) {
            cap_single.push_back(t.singles);
            cap_double.push_back(t.doubles);
            cap_noise.push_back(t.noises);
        }
    }
    const std::size_t trial_count = cap_single.size();

    auto tokens_for = [&](std::size_t words) {
        std::vector<int> tokens;
        for (std::size_t w = 0; w < words; ++w)
            tokens.insert(tokens.end(), static_cast<std::size_t>(d.pair_occurrences),
                          static_cast<int>(w));
        return tokens;
    };
    auto singles = place_tokens(tokens_for(d.single_words.size()), cap_single, rng,
                                "exp2 singles");
    auto doubles = place_tokens(tokens_for(d.double_words.size()), cap_double, rng,
                                "exp2 doubles");
    auto noises =
        place_tokens(tokens_for(d.noise_words.size()), cap_noise, rng, "exp2 noise");

    std::vector<std::size_t> order(trial_count);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    TrialSchedule sched;
    for (std::size_t t : order) {
        Stimulus s;
        for (int w : singles[t]) {
            s.words.push_back(d.single_words[static_cast<std::size_t>(w)]);
            s.referents.push_back(d.single_words[static_cast<std::size_t>(w)]);
        }
        for (int w : doubles[t]) {
            s.words.push_back(d.double_words[static_cast<std::size_t>(w)]);
            s.referents.push_back(d.double_words[static_cast<std::size_t>(w)]);
            s.referents.push_back(d.double_second_referents[static_cast<std::size_t>(w)]);
        }
        for (int w : noises[t]) s.words.push_back(d.noise_words[static_cast<std::size_t>(w)]);
        rng.shuffle(s.words);
        rng.shuffle(s.referents);
        sched.trials.push_back(std::move(s));
    }

    std::vector<std::string> pool = d.single_words;
    pool.insert(pool.end(), d.double_words.begin(), d.double_words.end());
    pool.insert(pool.end(), d.double_second_referents.begin(),
                d.double_second_referents.end());
    for (const std::string& word : d.single_words) {
        TestItem item;
        item.word = word;
        item.correct = {word};
        item.candidates = {word};
        for (std::string& foil :
             sample_others(pool, {word}, static_cast<std::size_t>(d.test_choices - 1), rng))
            item.candidates.push_back(std::move(foil));
        rng.shuffle(item.candidates);
        sched.tests.push_back(std::move(item));
    }
    for (std::size_t i = 0; i < d.double_words.size(); ++i) {
        TestItem item;
        item.word = d.double_words[i];
        item.correct = {d.double_words[i], d.double_second_referents[i]};
        item.candidates = item.correct;
        for (std::string& foil :
             sample_others(pool, {item.correct[0], item.correct[1]},
                           static_cast<std::size_t>(d.test_choices - 2), rng))
            item.candidates.push_back(std::move(foil));
        rng.shuffle(item.candidates);
        sched.tests.push_back(std::move(item));
    }
    rng.shuffle(sched.tests);
    return sched;
}

TrialSchedule gen_exp3_exp4(const ExperimentDesign& d, Rng& rng) {
    const bool ordered = d.family == "exp4";
    const int occ = d.pair_occurrences;
    const std::size_t single_count = d.single_words.size();
    const std::size_t double_count = d.double_words.size();
    const std::size_t token_total =
        single_count * static_cast<std::size_t>(occ) +
        double_count * 2 * static_cast<std::size_t>(occ);
    const std::size_t trial_count = token_total / 4;

    // Word ids: [0, single_count) singles, [single_count, ...) doubles.
    std::vector<int> tokens;
    for (std::size_t w = 0; w < single_count; ++w)
        tokens.insert(tokens.end(), static_cast<std::size_t>(occ), static_cast<int>(w));
    for (std::size_t w = 0; w < double_count; ++w)
        tokens.insert(tokens.end(), 2 * static_cast<std::size_t>(occ),
                      static_cast<int>(single_count + w));
    auto assigned = place_tokens(tokens, std::vector<int>(trial_count, 4), rng,
                                 ordered ? "exp4 schedule" : "exp3 schedule");
    rng.shuffle(assigned);

    // Referent choice per double-word occurrence, against the final trial order.
    std::map<int, std::vector<std::size_t>> double_trials;
    for (std::size_t t = 0; t < assigned.size(); ++t)
        for (int w : assigned[t])
            if (w >= static_cast<int>(single_count)) double_trials[w].push_back(t);

    TrialSchedule sched;
    std::map<std::pair<int, std::size_t>, std::string> referent_at;  // (word, trial)
    for (auto& [w, trial_list] : double_trials) {
        const std::size_t di = static_cast<std::size_t>(w) - single_count;
        const std::string& first = d.double_words[di];
        const std::string& second = d.double_second_referents[di];
        std::vector<std::string> bag;
        bag.insert(bag.end(), static_cast<std::size_t>(occ), first);
        bag.insert(bag.end(), static_cast<std::size_t>(occ), second);
        if (ordered) {
            const bool first_early = rng.next_index(2) == 0;
            const std::string& early = first_early ? first : second;
            const std::string& late = first_early ? second : first;
            std::sort(trial_list.begin(), trial_list.end());
            for (std::size_t k = 0; k < trial_list.size(); ++k)
                referent_at[{w, trial_list[k]}] =
                    k < static_cast<std::size_t>(occ) ? early : late;
            sched.early_late[d.double_words[di]] = {early, late};
        } else {
            rng.shuffle(bag);
            for (std::size_t k = 0; k < trial_list.size(); ++k)
                referent_at[{w, trial_list[k]}] = bag[k];
        }
    }

    for (std::size_t t = 0; t < assigned.size(); ++t) {
        Stimulus s;
        for (int w : assigned[t]) {
            if (w < static_cast<int>(single_count)) {
                s.words.push_back(d.single_words[static_cast<std::size_t>(w)]);
                s.referents.push_back(d.single_words[static_cast<std::size_t>(w)]);
            } else {
                const std::size_t di = static_cast<std::size_t>(w) - single_count;
                s.words.push_back(d.double_words[di]);
                s.referents.push_back(referent_at.at({w, t}));
            }
        }
        rng.shuffle(s.words);
        rng.shuffle(s.referents);
        sched.trials.push_back(std::move(s));
    }

    std::vector<std::string> pool = d.single_words;
    pool.insert(pool.end(), d.double_words.begin(), d.double_words.end());
    pool.insert(pool.end(), d.double_second_referents.begin(),
                d.double_second_referents.end());
    for (const std::string& word : d.single_words) {
        TestItem item;
        item.word = word;
        item.correct = {word};
        item.candidates = {word};
        for (std::string& foil :
             sample_others(pool, {word}, static_cast<std::size_t>(d.test_choices - 1), rng))
            item.candidates.push_back(std::move(foil));
        rng.shuffle(item.candidates);
        sched.tests.push_back(std::move(item));
    }
    for (std::size_t i = 0; i < d.double_words.size(); ++i) {
        TestItem item;
        item.word = d.double_words[i];
        item.correct = {d.double_words[i], d.double_second_referents[i]};
        item.candidates = item.correct;
        for (std::string& foil :
             sample_others(pool, {item.correct[0], item.correct[1]},
                           static_cast<std::size_t>(d.test_choices - 2), rng))
            item.candidates.push_back(std::move(foil));
        rng.shuffle(item.candidates);
        sched.tests.push_back(std::move(item));
    }
    rng.shuffle(sched.tests);
    return sched;
}

TrialSchedule gen_exp5(const ExperimentDesign& d, Rng& rng) {
    std::vector<std::string> order = d.words;
    rng.shuffle(order);

    TrialSchedule sched;
    for (int c = 0; c < d.cycles; ++c) {
        for (const std::string& word : order) {
            Stimulus s;
            s.words = {word};
            s.referents = {d.referent_of(word)};
            for (std::string& foil :
                 sample_others(d.words, {word},
                               static_cast<std::size_t>(d.referents_per_trial - 1), rng))
                s.referents.push_back(std::move(foil));
            rng.shuffle(s.referents);
            sched.trial_cycle.push_back(c);
            sched.trial_word.push_back(word);
            sched.trial_correct.push_back(d.referent_of(word));
            sched.trials.push_back(std::move(s));
        }
    }
    return sched;
}

TrialSchedule gen_exp6(const ExperimentDesign& d, Rng& rng) {
    TrialSchedule sched;
    auto list_words = [&](bool list_a) {
        std::vector<std::string> words = list_a ? d.list_a : d.list_b;
        words.push_back(d.ambiguous_word);
        return words;
    };
    auto al_referent = [&](bool list_a) { return list_a ? d.referent_a : d.referent_b; };

    for (int c = 0; c < d.cycles; ++c) {
        const bool is_a = c % 2 == 0;  // cycles alternate A, B, A, B, ...
        const std::vector<std::string>& lures_pool = is_a ? d.list_a : d.list_b;
        std::vector<std::string> tokens = list_words(is_a);
        tokens.insert(tokens.end(), lures_pool.begin(), lures_pool.end());
        tokens.push_back(d.ambiguous_word);  // each word appears twice per cycle
        rng.shuffle(tokens);

        for (const std::string& word : tokens) {
            const std::string correct =
                word == d.ambiguous_word ? al_referent(is_a) : d.referent_of(word);
            Stimulus s;
            s.words = {word};
            s.referents = {correct};
            for (std::string& lure :
                 sample_others(lures_pool, {correct},
                               static_cast<std::size_t>(d.referents_per_trial - 1), rng))
                s.referents.push_back(std::move(lure));
            rng.shuffle(s.referents);
            sched.trial_cycle.push_back(c);
            sched.trials.push_back(std::move(s));
        }
    }

    struct ConditionSpec {
        const char* name;
        int first_count;
        bool first_is_a;
    };
    // The later block induces the context the test should retrieve.
    const ConditionSpec specs[] = {{"3a+3b", 3, true}, {"3b+3a", 3, false},
                                   {"4a+2b", 4, true}, {"4b+2a", 4, false},
                                   {"5a+1b", 5, true}, {"5b+1a", 5, false}};
    for (const ConditionSpec& spec : specs) {
        Exp6Condition cond;
        cond.name = spec.name;
        const int second_count = d.induction_trials - spec.first_count;
        auto make_block = [&](bool is_a, int count) {
            const std::vector<std::string>& words = is_a ? d.list_a : d.list_b;
            const auto idx =
                rng.sample_indices(words.size(), static_cast<std::size_t>(count));
            for (std::size_t i : idx) {
                const std::string& word = words[i];
                Stimulus s;
                s.words = {word};
                s.referents = {d.referent_of(word)};
                for (std::string& lure :
                     sample_others(words, {word},
                                   static_cast<std::size_t>(d.induction_choices - 1),
                                   rng))
                    s.referents.push_back(std::move(lure));
                rng.shuffle(s.referents);
                cond.induction.push_back(std::move(s));
            }
        };
        make_block(spec.first_is_a, spec.first_count);
        make_block(!spec.first_is_a, second_count);

        const bool late_is_a = !spec.first_is_a;
        cond.al_test.word = d.ambiguous_word;
        cond.al_test.correct = {al_referent(late_is_a)};
        cond.al_test.candidates = {d.referent_a, d.referent_b};
        cond.al_test.candidates.push_back(
            d.list_a[rng.next_index(d.list_a.size())]);
        cond.al_test.candidates.push_back(
            d.list_b[rng.next_index(d.list_b.size())]);
        rng.shuffle(cond.al_test.candidates);
        sched.conditions.push_back(std::move(cond));
    }
    return sched;
}

}  // namespace

TrialSchedule gen_schedule(const ExperimentDesign& design, Rng& rng) {
    design.validate();
    if (design.family == "exp1") return gen_exp1(design, rng);
    if (design.family == "exp2") return gen_exp2(design, rng);
    if (design.family == "exp3" || design.family == "exp4")
        return gen_exp3_exp4(design, rng);
    if (design.family == "exp5") return gen_exp5(design, rng);
    if (design.family == "exp6") return gen_exp6(design, rng);
    throw_usage("gen_schedule: unknown family '" + design.family + "'");
}

namespace {

[[noreturn]] void violation(const std::string& msg) {
    throw_data("schedule validation: " + msg);
}

void check(bool cond, const std::string& msg) {
    if (!cond) violation(msg);
}

void check_test_items(const TrialSchedule& sched, const ExperimentDesign& d,
                      const std::vector<std::string>& pool,
                      std::size_t expected_items) {
    check(sched.tests.size() == expected_items,
          "expected " + std::to_string(expected_items) + " test items, got " +
              std::to_string(sched.tests.size()));
    const std::set<std::string> pool_set(pool.begin(), pool.end());
    for (const TestItem& item : sched.tests) {
        check(item.candidates.size() == static_cast<std::size_t>(d.test_choices),
              "test item for '" + item.word + "' has wrong candidate count");
        std::set<std::string> cand(item.candidates.begin(), item.candidates.end());
        check(cand.size() == item.candidates.size(),
              "duplicate candidates in test for '" + item.word + "'");
        for (const std::string& c : item.candidates)
            check(pool_set.count(c) > 0, "test candidate '" + c + "' outside pool");
        for (const std::string& c : item.correct)
            check(cand.count(c) > 0,
                  "correct referent missing from candidates for '" + item.word + "'");
    }
}

void validate_exp1(const ExperimentDesign& d, const TrialSchedule& sched) {
    const std::size_t expected_trials =
        d.words.size() * static_cast<std::size_t>(d.pair_occurrences) /
        static_cast<std::size_t>(d.condition_size);
    check(sched.trials.size() == expected_trials, "wrong trial count");
    std::map<std::string, int> occurrences;
    for (const Stimulus& s : sched.trials) {
        check(s.words.size() == static_cast<std::size_t>(d.condition_size),
              "trial word count != condition size");
        check(s.referents.size() == s.words.size(), "trial referent count mismatch");
        const std::set<std::string> words(s.words.begin(), s.words.end());
        const std::set<std::string> refs(s.referents.begin(), s.referents.end());
        check(words.size() == s.words.size(), "duplicate word in trial");
        // A label is present if and only if its referent is present.
        check(words == refs, "word/referent if-and-only-if violated");
        for (const std::string& w : s.words) ++occurrences[w];
    }
    for (const std::string& w : d.words)
        check(occurrences[w] == d.pair_occurrences,
              "word '" + w + "' occurs " + std::to_string(occurrences[w]) + " times");
    check_test_items(sched, d, d.words, d.words.size());
}

void validate_exp2(const ExperimentDesign& d, const TrialSchedule& sched) {
    check(sched.trials.size() == 27, "exp2 must have exactly 27 trials");
    const std::set<std::string> singles(d.single_words.begin(), d.single_words.end());
    const std::set<std::string> doubles(d.double_words.begin(), d.double_words.end());
    const std::set<std::string> noises(d.noise_words.begin(), d.noise_words.end());
    std::map<std::string, std::string> second_of;
    for (std::size_t i = 0; i < d.double_words.size(); ++i)
        second_of[d.double_words[i]] = d.double_second_referents[i];

    std::map<std::pair<int, int>, int> mix_count;  // (singles, doubles) -> trials
    std::map<std::string, int> word_occ;
    std::map<std::string, std::map<std::string, int>> cooccur;  // word -> referent -> n
    for (const Stimulus& s : sched.trials) {
        check(s.words.size() == 4, "exp2 trial must have 4 words");
        check(s.referents.size() == 4, "exp2 trial must have 4 referents");
        const std::set<std::string> word_set(s.words.begin(), s.words.end());
        check(word_set.size() == 4, "duplicate word in trial");
        std::multiset<std::string> expected_refs;
        int s_count = 0, d_count = 0, n_count = 0;
        for (const std::string& w : s.words) {
            ++word_occ[w];
            if (singles.count(w)) {
                ++s_count;
                expected_refs.insert(w);
            } else if (doubles.count(w)) {
                ++d_count;
                expected_refs.insert(w);
                expected_refs.insert(second_of[w]);
            } else if (noises.count(w)) {
                ++n_count;
            } else {
                violation("unknown word '" + w + "'");
            }
        }
        check(n_count == d_count || s_count == 4,
              "noise words must pad double-word trials");
        const std::multiset<std::string> refs(s.referents.begin(), s.referents.end());
        check(refs == expected_refs, "trial referents do not match its words");
        ++mix_count[{s_count, d_count}];
        for (const std::string& w : s.words) {
            if (noises.count(w)) continue;
            for (const std::string& r : s.referents) ++cooccur[w][r];
        }
    }
    check(mix_count[{4, 0}] == 2, "expected 2 all-single trials");
    check(mix_count[{2, 1}] == 14, "expected 14 trials with 2 singles + 1 double");
    check(mix_count[{0, 2}] == 11, "expected 11 trials with 2 doubles");
    for (const std::string& w : d.single_words) {
        check(word_occ[w] == d.pair_occurrences, "single word occurrence count");
        check(cooccur[w][w] == d.pair_occurrences, "single pair co-occurrence count");
    }
    for (const std::string& w : d.double_words) {
        check(word_occ[w] == d.pair_occurrences, "double word occurrence count");
        check(cooccur[w][w] == d.pair_occurrences, "double first-referent count");
        check(cooccur[w][second_of[w]] == d.pair_occurrences,
              "double second-referent count");
    }
    for (const std::string& w : d.noise_words)
        check(word_occ[w] == d.pair_occurrences, "noise word occurrence count");

    std::vector<std::string> pool = d.single_words;
    pool.insert(pool.end(), d.double_words.begin(), d.double_words.end());
    pool.insert(pool.end(), d.double_second_referents.begin(),
                d.double_second_referents.end());
    check_test_items(sched, d, pool, d.single_words.size() + d.double_words.size());
}

void validate_exp3_exp4(const ExperimentDesign& d, const TrialSchedule& sched) {
    const bool ordered = d.family == "exp4";
    const std::size_t expected_trials =
        (d.single_words.size() * static_cast<std::size_t>(d.pair_occurrences) +
         d.double_words.size() * 2 * static_cast<std::size_t>(d.pair_occurrences)) /
        4;
    check(sched.trials.size() == expected_trials, "wrong trial count");
    const std::set<std::string> singles(d.single_words.begin(), d.single_words.end());
    const std::set<std::string> doubles(d.double_words.begin(), d.double_words.end());
    std::map<std::string, std::string> second_of;
    for (std::size_t i = 0; i < d.double_words.size(); ++i)
        second_of[d.double_words[i]] = d.double_second_referents[i];

    std::map<std::string, std::map<std::string, std::vector<std::size_t>>> pair_trials;
    for (std::size_t t = 0; t < sched.trials.size(); ++t) {
        const Stimulus& s = sched.trials[t];
        check(s.words.size() == 4 && s.referents.size() == 4,
              "trials must pair 4 words with 4 referents");
        const std::set<std::string> word_set(s.words.begin(), s.words.end());
        check(word_set.size() == 4, "duplicate word in trial");
        std::multiset<std::string> refs(s.referents.begin(), s.referents.end());
        for (const std::string& w : s.words) {
            if (singles.count(w)) {
                check(refs.count(w) > 0, "single word referent missing");
                refs.erase(refs.find(w));
                pair_trials[w][w].push_back(t);
            } else if (doubles.count(w)) {
                const bool has_first = refs.count(w) > 0;
                const bool has_second = refs.count(second_of[w]) > 0;
                check(has_first != has_second,
                      "double word must appear with exactly one referent per trial");
                const std::string r = has_first ? w : second_of[w];
                refs.erase(refs.find(r));
                pair_trials[w][r].push_back(t);
            } else {
                violation("unknown word '" + w + "'");
            }
        }
        check(refs.empty(), "trial has referents not matching any word");
    }
    for (const std::string& w : d.single_words)
        check(static_cast<int>(pair_trials[w][w].size()) == d.pair_occurrences,
              "single pair co-occurrence count");
    for (const std::string& w : d.double_words) {
        check(static_cast<int>(pair_trials[w][w].size()) == d.pair_occurrences,
              "double first-referent co-occurrence count");
        check(static_cast<int>(pair_trials[w][second_of[w]].size()) ==
                  d.pair_occurrences,
              "double second-referent co-occurrence count");
        if (ordered) {
            auto it = sched.early_late.find(w);
            check(it != sched.early_late.end(), "missing early/late record for '" + w + "'");
            const auto& [early, late] = it->second;
            check((early == w && late == second_of[w]) ||
                      (early == second_of[w] && late == w),
                  "early/late record names wrong referents");
            const auto& early_trials = pair_trials[w][early];
            const auto& late_trials = pair_trials[w][late];
            const std::size_t max_early =
                *std::max_element(early_trials.begin(), early_trials.end());
            const std::size_t min_late =
                *std::min_element(late_trials.begin(), late_trials.end());
            check(max_early < min_late,
                  "early referent of '" + w + "' must finish before the late one starts");
        }
    }
    std::vector<std::string> pool = d.single_words;
    pool.insert(pool.end(), d.double_words.begin(), d.double_words.end());
    pool.insert(pool.end(), d.double_second_referents.begin(),
                d.double_second_referents.end());
    check_test_items(sched, d, pool, d.single_words.size() + d.double_words.size());
}

void validate_exp5(const ExperimentDesign& d, const TrialSchedule& sched) {
    const std::size_t per_cycle = d.words.size();
    check(sched.trials.size() == per_cycle * static_cast<std::size_t>(d.cycles),
          "wrong trial count");
    check(sched.trial_word.size() == sched.trials.size() &&
              sched.trial_correct.size() == sched.trials.size() &&
              sched.trial_cycle.size() == sched.trials.size(),
          "per-trial annotations missing");
    for (int c = 0; c < d.cycles; ++c) {
        for (std::size_t i = 0; i < per_cycle; ++i) {
            const std::size_t t = static_cast<std::size_t>(c) * per_cycle + i;
            check(sched.trial_cycle[t] == c, "cycle annotation mismatch");
            check(sched.trial_word[t] == sched.trial_word[i],
                  "word order must be identical across cycles");
            const Stimulus& s = sched.trials[t];
            check(s.words.size() == 1 && s.words[0] == sched.trial_word[t],
                  "trial word mismatch");
            check(s.referents.size() == static_cast<std::size_t>(d.referents_per_trial),
                  "wrong referent count");
            const std::set<std::string> refs(s.referents.begin(), s.referents.end());
            check(refs.size() == s.referents.size(), "duplicate referents in trial");
            check(refs.count(sched.trial_correct[t]) > 0, "correct referent missing");
            check(sched.trial_correct[t] == d.referent_of(s.words[0]),
                  "trial correct referent mismatch");
        }
        // Each word exactly once per cycle.
        std::set<std::string> cycle_words;
        for (std::size_t i = 0; i < per_cycle; ++i)
            cycle_words.insert(sched.trial_word[static_cast<std::size_t>(c) * per_cycle + i]);
        check(cycle_words.size() == per_cycle, "a word repeats within a cycle");
    }
}

void validate_exp6(const ExperimentDesign& d, const TrialSchedule& sched) {
    const std::size_t per_cycle = static_cast<std::size_t>(d.trials_per_cycle);
    check(sched.trials.size() == per_cycle * static_cast<std::size_t>(d.cycles),
          "wrong trial count");
    check(sched.trial_cycle.size() == sched.trials.size(), "cycle annotations missing");
    const std::set<std::string> a_words(d.list_a.begin(), d.list_a.end());
    const std::set<std::string> b_words(d.list_b.begin(), d.list_b.end());
    const std::set<std::string> a_refs(d.list_a.begin(), d.list_a.end());
    const std::set<std::string> b_refs(d.list_b.begin(), d.list_b.end());

    for (std::size_t t = 0; t < sched.trials.size(); ++t) {
        const int c = sched.trial_cycle[t];
        check(static_cast<std::size_t>(c) == t / per_cycle, "cycle annotation mismatch");
        const bool is_a = c % 2 == 0;
        const Stimulus& s = sched.trials[t];
        check(s.words.size() == 1, "training trials are single-word");
        const std::string& w = s.words[0];
        const auto& words = is_a ? a_words : b_words;
        check(words.count(w) > 0 || w == d.ambiguous_word,
              "trial word '" + w + "' does not belong to the cycle's list");
        check(s.referents.size() == static_cast<std::size_t>(d.referents_per_trial),
              "wrong referent count");
        const std::set<std::string> refs(s.referents.begin(), s.referents.end());
        check(refs.size() == s.referents.size(), "duplicate referents in trial");
        const std::string correct =
            w == d.ambiguous_word ? (is_a ? d.referent_a : d.referent_b)
                                  : d.referent_of(w);
        check(refs.count(correct) > 0, "correct referent missing");
        const auto& pool = is_a ? a_refs : b_refs;
        for (const std::string& r : s.referents)
            check(r == correct || pool.count(r) > 0,
                  "lure '" + r + "' outside the cycle's list");
    }
    // Each list word (plus the ambiguous label) appears exactly twice per cycle.
    for (int c = 0; c < d.cycles; ++c) {
        std::map<std::string, int> counts;
        for (std::size_t i = 0; i < per_cycle; ++i)
            ++counts[sched.trials[static_cast<std::size_t>(c) * per_cycle + i].words[0]];
        const std::vector<std::string>& words = c % 2 == 0 ? d.list_a : d.list_b;
        for (const std::string& w : words)
            check(counts[w] == 2, "word '" + w + "' must appear twice per cycle");
        check(counts[d.ambiguous_word] == 2, "ambiguous word must appear twice per cycle");
    }

    check(sched.conditions.size() == 6, "expected 6 test conditions");
    const std::set<std::string> expected_names = {"3a+3b", "3b+3a", "4a+2b",
                                                  "4b+2a", "5a+1b", "5b+1a"};
    std::set<std::string> got_names;
    for (const Exp6Condition& cond : sched.conditions) {
        got_names.insert(cond.name);
        check(cond.induction.size() == static_cast<std::size_t>(d.induction_trials),
              "wrong induction trial count in " + cond.name);
        const int first_count = cond.name[0] - '0';
        const bool first_is_a = cond.name[1] == 'a';
        std::set<std::string> block_words;
        for (std::size_t i = 0; i < cond.induction.size(); ++i) {
            const bool in_first = i < static_cast<std::size_t>(first_count);
            const bool is_a = in_first ? first_is_a : !first_is_a;
            const Stimulus& s = cond.induction[i];
            check(s.words.size() == 1, "induction trials are single-word");
            const std::string& w = s.words[0];
            check(w != d.ambiguous_word, "induction must exclude the ambiguous word");
            check((is_a ? a_words : b_words).count(w) > 0,
                  "induction word '" + w + "' in the wrong list block");
            check(block_words.insert(w + (in_first ? "|1" : "|2")).second,
                  "induction word repeated within a block");
            check(s.referents.size() == static_cast<std::size_t>(d.induction_choices),
                  "wrong induction candidate count");
            const std::set<std::string> refs(s.referents.begin(), s.referents.end());
            check(refs.size() == s.referents.size(), "duplicate induction referents");
            check(refs.count(d.referent_of(w)) > 0, "induction correct referent missing");
            for (const std::string& r : s.referents)
                check((is_a ? a_refs : b_refs).count(r) > 0,
                      "induction lure outside list (" + r + ")");
        }
        const bool late_is_a = !first_is_a;
        check(cond.al_test.word == d.ambiguous_word, "AL test must probe the ambiguous word");
        check(cond.al_test.correct.size() == 1 &&
                  cond.al_test.correct[0] == (late_is_a ? d.referent_a : d.referent_b),
              "AL test correct referent must match the late list");
        check(cond.al_test.candidates.size() == static_cast<std::size_t>(d.test_choices),
              "AL test must be four-alternative");
        const std::set<std::string> cand(cond.al_test.candidates.begin(),
                                         cond.al_test.candidates.end());
        check(cand.size() == cond.al_test.candidates.size(), "duplicate AL candidates");
        check(cand.count(d.referent_a) > 0 && cand.count(d.referent_b) > 0,
              "AL test must offer both ambiguous referents");
        int lure_a = 0, lure_b = 0;
        for (const std::string& c : cond.al_test.candidates) {
            if (c == d.referent_a || c == d.referent_b) continue;
            if (a_refs.count(c)) ++lure_a;
            else if (b_refs.count(c)) ++lure_b;
            else violation("AL lure outside both lists");
        }
        check(lure_a == 1 && lure_b == 1, "AL test needs one lure from each list");
    }
    check(got_names == expected_names, "condition names must cover all six blocks");
}

}  // namespace

void validate_schedule(const ExperimentDesign& design, const TrialSchedule& schedule) {
    design.validate();
    if (design.family == "exp1") validate_exp1(design, schedule);
    else if (design.family == "exp2") validate_exp2(design, schedule);
    else if (design.family == "exp3" || design.family == "exp4")
        validate_exp3_exp4(design, schedule);
    else if (design.family == "exp5") validate_exp5(design, schedule);
    else if (design.family == "exp6") validate_exp6(design, schedule);
    else throw_usage("validate_schedule: unknown family '" + design.family + "'");
}

}  // namespace wordmap
