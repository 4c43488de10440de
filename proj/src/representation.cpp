#include "wordmap/representation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "wordmap/errors.hpp"

namespace wordmap {

namespace {

double l2_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

std::vector<ObjectDescriptors> load_descriptors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open descriptor file '" + path.string() + "'");

    std::vector<ObjectDescriptors> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    ObjectDescriptors* current = nullptr;

    auto finish_current = [&](ObjectDescriptors* obj) {
        if (obj && obj->descriptors.empty())
            throw_data(path.string() + ": object '" + obj->name + "' has no descriptors");
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            static const std::string kHeader = "# object:";
            if (line.rfind(kHeader, 0) == 0) {
                finish_current(current);
                std::string name = line.substr(kHeader.size());
                const auto begin = name.find_first_not_of(" \t");
                name = begin == std::string::npos ? std::string() : name.substr(begin);
                const auto end = name.find_last_not_of(" \t");
                if (end != std::string::npos) name.resize(end + 1);
                if (name.empty())
                    throw_data(path.string() + ":" + std::to_string(line_no) +
                               ": object header with empty name");
                if (!seen.insert(name).second)
                    throw_data(path.string() + ":" + std::to_string(line_no) +
                               ": duplicate object '" + name + "'");
                out.push_back(ObjectDescriptors{name, {}});
                current = &out.back();
            }
            continue;  // other '#' lines are comments
        }
        if (!current)
            throw_data(path.string() + ":" + std::to_string(line_no) +
                       ": descriptor row before any '# object:' header");
        std::istringstream row(line);
        std::vector<double> d;
        d.reserve(kDescriptorDim);
        double v;
        while (row >> v) d.push_back(v);
        if (d.size() != kDescriptorDim)
            throw_data(path.string() + ":" + std::to_string(line_no) + ": row has " +
                       std::to_string(d.size()) + " values, expected " +
                       std::to_string(kDescriptorDim));
        const double n = l2_norm(d);
        if (n <= 0.0)
            throw_data(path.string() + ":" + std::to_string(line_no) +
                       ": zero-norm descriptor cannot be normalized");
        if (std::fabs(n - 1.0) > 1e-6)
            for (double& x : d) x /= n;
        current->descriptors.push_back(std::move(d));
    }
    finish_current(current);
    return out;
}

void save_descriptors(const std::filesystem::path& path,
                      std::span<const ObjectDescriptors> objects) {
    std::ofstream out(path);
    if (!out) throw_runtime("cannot write descriptor file '" + path.string() + "'");
    char buf[32];
    for (const ObjectDescriptors& obj : objects) {
        out << "# object: " << obj.name << '\n';
        for (const auto& d : obj.descriptors) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.9f", d[i]);
                if (i) out << ' ';
                out << buf;
            }
            out << '\n';
        }
    }
    if (!out) throw_runtime("write failed for '" + path.string() + "'");
}

Codebook::Codebook(SomMap map, Modality modality)
    : map_(std::move(map)), modality_(modality) {
    map_.freeze();
}

FeatureHistogram Codebook::encode(std::span<const std::vector<double>> features,
                                  HistogramWeighting weighting) const {
    FeatureHistogram h;
    h.modality = modality_;
    h.values.assign(map_.size(), 0.0);
    for (const auto& f : features) {
        if (f.size() != map_.dim())
            throw_usage("encode_histogram: feature dimension " +
                        std::to_string(f.size()) + " does not match codebook dimension " +
                        std::to_string(map_.dim()));
        const auto [id, act] = map_.best_activation(f);
        if (act < map_.params().a_t) continue;  // not recognized by any node
        for (std::size_t bin = 0; bin < map_.nodes().size(); ++bin) {
            if (map_.nodes()[bin].id == id) {
                h.values[bin] += 1.0;
                break;
            }
        }
    }
    if (weighting == HistogramWeighting::binary)
        for (double& v : h.values) v = v > 0.0 ? 1.0 : 0.0;
    const double n = l2_norm(h.values);
    if (n > 0.0) {
        for (double& v : h.values) v /= n;
        h.recognized = true;
    }
    return h;
}

Codebook build_codebook(std::span<const std::vector<double>> features,
                        const MapParamsSpec& params, Modality modality,
                        const CodebookTrainConfig& config) {
    if (features.empty()) throw_data("build_codebook: empty feature set");
    const std::size_t dim = features.front().size();
    for (const auto& f : features)
        if (f.size() != dim) throw_data("build_codebook: inconsistent feature dimensions");
    if (config.passes < 1) throw_usage("build_codebook: passes must be >= 1");

    const MapParams resolved = params.resolve(features.size());
    SomMap map(resolved, features.front(), config.seed);
    for (int pass = 0; pass < config.passes; ++pass)
        for (const auto& f : features) map.organize_step(f);
    return Codebook(std::move(map), modality);
}

FeatureHistogram encode_histogram(const Codebook& book,
                                  std::span<const std::vector<double>> features,
                                  HistogramWeighting weighting) {
    return book.encode(features, weighting);
}

std::vector<ObjectDescriptors> make_synthetic_descriptors(
    const SyntheticDescriptorSpec& spec) {
    if (spec.names.empty()) throw_usage("synthetic descriptors: no object names");
    if (spec.per_object < 1) throw_usage("synthetic descriptors: per_object must be >= 1");
    if (spec.archetypes < 1) throw_usage("synthetic descriptors: archetypes must be >= 1");
    if (spec.min_mix < 1 || spec.max_mix < spec.min_mix)
        throw_usage("synthetic descriptors: bad mix range");
    if (spec.noise < 0.0) throw_usage("synthetic descriptors: noise must be >= 0");

    Rng rng(spec.seed);
    std::vector<std::vector<double>> archetypes(
        static_cast<std::size_t>(spec.archetypes));
    for (auto& a : archetypes) {
        a.resize(kDescriptorDim);
        for (double& x : a) x = rng.next_gaussian();
        const double n = l2_norm(a);
        for (double& x : a) x /= n;
    }

    std::vector<ObjectDescriptors> out;
    out.reserve(spec.names.size());
    for (const std::string& name : spec.names) {
        const std::size_t mix =
            static_cast<std::size_t>(spec.min_mix) +
            rng.next_index(static_cast<std::size_t>(spec.max_mix - spec.min_mix + 1));
        const auto chosen = rng.sample_indices(archetypes.size(), mix);
        std::vector<double> weights(chosen.size());
        double wsum = 0.0;
        for (double& w : weights) {
            w = -std::log(1.0 - rng.next_double());
            wsum += w;
        }
        std::vector<double> cumulative(chosen.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i] / wsum;
            cumulative[i] = acc;
        }

        ObjectDescriptors obj;
        obj.name = name;
        obj.descriptors.reserve(static_cast<std::size_t>(spec.per_object));
        for (int k = 0; k < spec.per_object; ++k) {
            const double pick = rng.next_double();
            std::size_t idx = 0;
            while (idx + 1 < cumulative.size() && pick > cumulative[idx]) ++idx;
            const std::vector<double>& base = archetypes[chosen[idx]];
            std::vector<double> d(kDescriptorDim);
            for (int i = 0; i < kDescriptorDim; ++i)
                d[static_cast<std::size_t>(i)] =
                    base[static_cast<std::size_t>(i)] + spec.noise * rng.next_gaussian();
            const double n = l2_norm(d);
            for (double& x : d) x /= n;
            obj.descriptors.push_back(std::move(d));
        }
        out.push_back(std::move(obj));
    }
    return out;
}

}  // namespace wordmap
