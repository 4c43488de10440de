#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "wordmap/art2.hpp"
#include "wordmap/representation.hpp"
#include "wordmap/som.hpp"

namespace wordmap {

// How often the context network is advanced: once per trial on the mean
// visual representation (default), or once per paired input.
enum class ContextGranularity { per_trial, per_input };

// Full parameter block. Defaults reproduce the shipped tuning for the four
// modules (two codebook maps, context network, association map).
struct Params {
    MapParamsSpec visual;
    MapParamsSpec auditory;
    MapParamsSpec association;
    Art2Params context;  // n is bound when a model is built
    CodebookTrainConfig codebook;
    ContextGranularity context_granularity = ContextGranularity::per_trial;
    HistogramWeighting histogram_weighting = HistogramWeighting::count;

    static Params defaults();

    // Flat key=value settings; unknown keys and malformed values are errors.
    void set(std::string_view key, std::string_view value);
    void load_file(const std::filesystem::path& path);

    // Canonical serialization (stable key order, 17 significant digits).
    void write(std::ostream& out) const;
    std::string to_string() const;

    // FNV-1a over the canonical serialization.
    std::uint64_t hash() const;
    std::string hash_hex() const;
};

}  // namespace wordmap
