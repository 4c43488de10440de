#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordmap/art2.hpp"
#include "wordmap/dataset.hpp"
#include "wordmap/params.hpp"
#include "wordmap/som.hpp"

namespace wordmap {

struct Stimulus {
    std::vector<std::string> words;
    std::vector<std::string> referents;  // object names
};

struct AssociationInput {
    FeatureHistogram visual;
    FeatureHistogram auditory;
    std::vector<double> context;
    std::string referent;

    // visual ++ auditory ++ context
    std::vector<double> flat() const;
};

// Frozen per-dataset state shared by all participants: the two codebooks and
// the cached per-object visual histograms. Built once, immutable afterwards.
class EncodedDataset {
public:
    static std::shared_ptr<const EncodedDataset> build(Dataset dataset,
                                                       const Params& params);

    const Codebook& auditory_codebook() const { return auditory_; }
    const Codebook& visual_codebook() const { return visual_; }
    std::size_t context_dim() const { return visual_.size() + auditory_.size(); }
    std::size_t association_dim() const { return 2 * context_dim(); }

    const FeatureHistogram& visual_histogram(std::string_view object) const;
    FeatureHistogram word_histogram(std::string_view word) const;
    // Histogram over the concatenated phoneme stream of all words (silent
    // separator between consecutive words).
    FeatureHistogram stream_histogram(std::span<const std::string> words) const;

    const Dataset& dataset() const { return dataset_; }
    const Params& params() const { return params_; }

private:
    EncodedDataset(Dataset dataset, Params params, Codebook auditory, Codebook visual);

    Dataset dataset_;
    Params params_;
    Codebook auditory_;
    Codebook visual_;
    std::map<std::string, FeatureHistogram, std::less<>> visual_cache_;
};

// One simulated participant: a context network and an association map over a
// shared encoded dataset. Value type; copy a trained state to branch it.
class ModelState {
public:
    ModelState(std::shared_ptr<const EncodedDataset> world, std::uint64_t seed);

    // Advances the context network once with the trial's combined
    // representation (mean visual histogram ++ auditory stream histogram).
    void advance_context(const Stimulus& stimulus);

    // One AssociationInput per referent, all sharing the trial's auditory
    // histogram and the context vector current after this trial's context
    // advance(s).
    std::vector<AssociationInput> build_trial_inputs(const Stimulus& stimulus);

    // Feeds the trial's inputs to the association map in randomized order;
    // returns how many nodes were inserted.
    int train_trial(const Stimulus& stimulus);

    struct RecordedTrial {
        int created = 0;
        std::string choice;               // referent with the highest pre-update activation
        std::vector<double> activations;  // aligned with stimulus.referents
    };
    // Like train_trial, but first records the winner activation of each input
    // on the pre-trial map (test-on-every-trial protocol).
    RecordedTrial train_trial_recorded(const Stimulus& stimulus);

    // Winner activation of the (word, referent) pairing against the frozen
    // association map, with the current context attached. No side effects.
    double score_pairing(std::string_view word, std::string_view referent) const;

    // Referents sorted by descending score_pairing; presentation order is
    // randomized first, which also resolves ties uniformly at random.
    std::vector<std::string> rank_candidates(std::string_view word,
                                             std::span<const std::string> referents);

    const SomMap& association() const { return association_; }
    const Art2Network& context() const { return context_; }
    std::vector<double> context_vector() const { return context_.context_vector(); }
    const EncodedDataset& world() const { return *world_; }
    Rng& rng() { return rng_; }
    void reseed(std::uint64_t seed) { rng_ = Rng(seed); }

private:
    AssociationInput make_input(const FeatureHistogram& aud, std::string_view referent,
                                const std::vector<double>& context) const;

    std::shared_ptr<const EncodedDataset> world_;
    Art2Network context_;
    SomMap association_;
    Rng rng_;
};

}  // namespace wordmap
