#include "wordmap/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "wordmap/errors.hpp"

namespace wordmap {

namespace {

std::vector<std::vector<double>> to_rows(const std::vector<PhonemeVector>& vs) {
    std::vector<std::vector<double>> rows;
    rows.reserve(vs.size());
    for (const auto& v : vs) rows.emplace_back(v.begin(), v.end());
    return rows;
}

}  // namespace

std::vector<double> AssociationInput::flat() const {
    std::vector<double> out;
    out.reserve(visual.values.size() + auditory.values.size() + context.size());
    out.insert(out.end(), visual.values.begin(), visual.values.end());
    out.insert(out.end(), auditory.values.begin(), auditory.values.end());
    out.insert(out.end(), context.begin(), context.end());
    return out;
}

EncodedDataset::EncodedDataset(Dataset dataset, Params params, Codebook auditory,
                               Codebook visual)
    : dataset_(std::move(dataset)),
      params_(std::move(params)),
      auditory_(std::move(auditory)),
      visual_(std::move(visual)) {
    for (const ObjectDescriptors& obj : dataset_.objects)
        visual_cache_.emplace(
            obj.name, visual_.encode(obj.descriptors, params_.histogram_weighting));
}

std::shared_ptr<const EncodedDataset> EncodedDataset::build(Dataset dataset,
                                                            const Params& params) {
    // Auditory codebook: pre-trained on the full phoneme feature table.
    const PhonemeTable& table = PhonemeTable::builtin();
    std::vector<std::vector<double>> phoneme_rows;
    phoneme_rows.reserve(table.size());
    for (const auto& [sym, vec] : table.entries())
        phoneme_rows.emplace_back(vec.begin(), vec.end());
    CodebookTrainConfig aud_cfg = params.codebook;
    aud_cfg.seed = mix_seed(params.codebook.seed, 0);
    Codebook auditory =
        build_codebook(phoneme_rows, params.auditory, Modality::auditory, aud_cfg);

    // Visual codebook: pre-trained on every descriptor in the dataset.
    std::vector<std::vector<double>> visual_rows;
    for (const ObjectDescriptors& obj : dataset.objects)
        visual_rows.insert(visual_rows.end(), obj.descriptors.begin(),
                           obj.descriptors.end());
    if (visual_rows.empty()) throw_data("dataset has no visual descriptors");
    CodebookTrainConfig vis_cfg = params.codebook;
    vis_cfg.seed = mix_seed(params.codebook.seed, 1);
    Codebook visual =
        build_codebook(visual_rows, params.visual, Modality::visual, vis_cfg);

    return std::shared_ptr<const EncodedDataset>(new EncodedDataset(
        std::move(dataset), params, std::move(auditory), std::move(visual)));
}

const FeatureHistogram& EncodedDataset::visual_histogram(std::string_view object) const {
    auto it = visual_cache_.find(object);
    if (it == visual_cache_.end())
        throw_data("object '" + std::string(object) + "' not present in dataset");
    return it->second;
}

FeatureHistogram EncodedDataset::word_histogram(std::string_view word) const {
    const std::vector<std::string> words{std::string(word)};
    return stream_histogram(words);
}

FeatureHistogram EncodedDataset::stream_histogram(
    std::span<const std::string> words) const {
    const auto stream =
        encode_word_sequence(dataset_.lexicon, dataset_.table(), words);
    return auditory_.encode(to_rows(stream), params_.histogram_weighting);
}

ModelState::ModelState(std::shared_ptr<const EncodedDataset> world, std::uint64_t seed)
    : world_(std::move(world)),
      context_([&] {
          Art2Params p = world_->params().context;
          p.n = static_cast<int>(world_->context_dim());
          return Art2Network(p);
      }()),
      association_([&] {
          const MapParamsSpec& spec = world_->params().association;
          if (spec.maxcomp_scaled)
              throw_usage("association.maxcomp must be absolute (stream length is "
                          "not known up front); use association.maxcomp");
          const std::size_t dim = world_->association_dim();
          Rng init_rng(mix_seed(seed, 0));
          std::vector<double> center(dim);
          for (double& x : center) x = init_rng.next_double();
          return SomMap(spec.resolve(0), std::move(center), mix_seed(seed, 1));
      }()),
      rng_(mix_seed(seed, 2)) {}

AssociationInput ModelState::make_input(const FeatureHistogram& aud,
                                        std::string_view referent,
                                        const std::vector<double>& context) const {
    AssociationInput input;
    input.visual = world_->visual_histogram(referent);
    input.auditory = aud;
    input.context = context;
    input.referent = std::string(referent);
    return input;
}

void ModelState::advance_context(const Stimulus& stimulus) {
    if (stimulus.words.empty()) throw_data("stimulus has no words");
    if (stimulus.referents.empty()) throw_data("stimulus has no referents");
    const FeatureHistogram aud = world_->stream_histogram(stimulus.words);
    const std::size_t kv = world_->visual_codebook().size();
    std::vector<double> combined(kv, 0.0);
    for (const std::string& r : stimulus.referents) {
        const FeatureHistogram& vis = world_->visual_histogram(r);
        for (std::size_t i = 0; i < kv; ++i) combined[i] += vis.values[i];
    }
    const double inv = 1.0 / static_cast<double>(stimulus.referents.size());
    for (double& x : combined) x *= inv;
    combined.insert(combined.end(), aud.values.begin(), aud.values.end());
    context_.train_pattern(combined);
}

std::vector<AssociationInput> ModelState::build_trial_inputs(const Stimulus& stimulus) {
    if (stimulus.words.empty()) throw_data("stimulus has no words");
    if (stimulus.referents.empty()) throw_data("stimulus has no referents");
    const FeatureHistogram aud = world_->stream_histogram(stimulus.words);
    std::vector<AssociationInput> inputs;
    inputs.reserve(stimulus.referents.size());

    if (world_->params().context_granularity == ContextGranularity::per_trial) {
        advance_context(stimulus);
        const std::vector<double> uc = context_.context_vector();
        for (const std::string& r : stimulus.referents)
            inputs.push_back(make_input(aud, r, uc));
    } else {
        for (const std::string& r : stimulus.referents) {
            const FeatureHistogram& vis = world_->visual_histogram(r);
            std::vector<double> combined(vis.values.begin(), vis.values.end());
            combined.insert(combined.end(), aud.values.begin(), aud.values.end());
            context_.train_pattern(combined);
            inputs.push_back(make_input(aud, r, context_.context_vector()));
        }
    }
    return inputs;
}

int ModelState::train_trial(const Stimulus& stimulus) {
    std::vector<AssociationInput> inputs = build_trial_inputs(stimulus);
    rng_.shuffle(inputs);
    int created = 0;
    for (const AssociationInput& input : inputs) {
        const StepEvent ev = association_.organize_step(input.flat());
        if (ev.kind == StepEvent::Kind::inserted) ++created;
    }
    return created;
}

ModelState::RecordedTrial ModelState::train_trial_recorded(const Stimulus& stimulus) {
    std::vector<AssociationInput> inputs = build_trial_inputs(stimulus);

    RecordedTrial rec;
    rec.activations.resize(inputs.size());
    double best = -1.0;
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const double act = association_.best_activation(inputs[i].flat()).second;
        rec.activations[i] = act;
        if (act > best) {
            best = act;
            ties.assign(1, i);
        } else if (act == best) {
            ties.push_back(i);
        }
    }
    const std::size_t pick = ties.size() == 1 ? ties[0] : ties[rng_.next_index(ties.size())];
    rec.choice = inputs[pick].referent;

    rng_.shuffle(inputs);
    for (const AssociationInput& input : inputs) {
        const StepEvent ev = association_.organize_step(input.flat());
        if (ev.kind == StepEvent::Kind::inserted) ++rec.created;
    }
    return rec;
}

double ModelState::score_pairing(std::string_view word, std::string_view referent) const {
    const FeatureHistogram aud = world_->word_histogram(word);
    const AssociationInput input =
        make_input(aud, referent, context_.context_vector());
    return association_.best_activation(input.flat()).second;
}

std::vector<std::string> ModelState::rank_candidates(
    std::string_view word, std::span<const std::string> referents) {
    if (referents.empty()) throw_usage("rank_candidates: no referents");
    std::vector<std::string> order(referents.begin(), referents.end());
    rng_.shuffle(order);
    std::vector<std::pair<double, std::size_t>> scored(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        scored[i] = {score_pairing(word, order[i]), i};
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::string> ranked;
    ranked.reserve(order.size());
    for (const auto& [score, idx] : scored) ranked.push_back(order[idx]);
    return ranked;
}

}  // namespace wordmap
