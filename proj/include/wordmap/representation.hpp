#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wordmap/som.hpp"

namespace wordmap {

inline constexpr int kDescriptorDim = 128;

struct ObjectDescriptors {
    std::string name;
    std::vector<std::vector<double>> descriptors;  // each 128-dim, unit L2 norm
};

// Text format: blocks headed by "# object: <name>", one descriptor per line as
// 128 space-separated decimals. Other '#' lines are comments. Rows whose norm
// deviates from 1 by more than 1e-6 are renormalized.
std::vector<ObjectDescriptors> load_descriptors(const std::filesystem::path& path);
void save_descriptors(const std::filesystem::path& path,
                      std::span<const ObjectDescriptors> objects);

enum class Modality { auditory, visual };
enum class HistogramWeighting { count, binary };

struct FeatureHistogram {
    std::vector<double> values;  // unit L2 norm unless !recognized (all zero)
    Modality modality = Modality::visual;
    bool recognized = false;
};

struct CodebookTrainConfig {
    int passes = 2;
    std::uint64_t seed = 1;
};

// A frozen map whose nodes define histogram bins.
class Codebook {
public:
    Codebook(SomMap map, Modality modality);

    std::size_t size() const { return map_.size(); }
    std::size_t feature_dim() const { return map_.dim(); }
    Modality modality() const { return modality_; }
    const SomMap& map() const { return map_; }

    // Bag-of-features histogram: each feature increments the bin of its first
    // winner; features no node recognizes are dropped. L2-normalized; an
    // all-dropped (or empty) input yields a flagged zero histogram.
    FeatureHistogram encode(std::span<const std::vector<double>> features,
                            HistogramWeighting weighting = HistogramWeighting::count) const;

private:
    SomMap map_;
    Modality modality_;
};

// Trains a map on the feature stream (`passes` identical passes in dataset
// order) and freezes it. The cluster count is emergent.
Codebook build_codebook(std::span<const std::vector<double>> features,
                        const MapParamsSpec& params, Modality modality,
                        const CodebookTrainConfig& config = {});

FeatureHistogram encode_histogram(const Codebook& book,
                                  std::span<const std::vector<double>> features,
                                  HistogramWeighting weighting = HistogramWeighting::count);

// Synthetic descriptor generation: each object draws unit descriptors around a
// small mixture of shared archetype directions.
struct SyntheticDescriptorSpec {
    std::vector<std::string> names;
    int per_object = 60;
    int archetypes = 37;
    int min_mix = 4;
    int max_mix = 8;
    double noise = 0.08;
    std::uint64_t seed = 1234567;
};

std::vector<ObjectDescriptors> make_synthetic_descriptors(
    const SyntheticDescriptorSpec& spec);

}  // namespace wordmap
