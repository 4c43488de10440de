#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wordmap {

inline constexpr int kPhonemeFeatures = 12;
using PhonemeVector = std::array<double, kPhonemeFeatures>;

// ARPAbet symbol -> 12 articulatory features in [-1, 1]. Vowels use the first
// 4 components, consonants the last 8; the silent marker '#' is all zeros.
class PhonemeTable {
public:
    static const PhonemeTable& builtin();

    bool contains(std::string_view symbol) const;
    const PhonemeVector& vector_of(std::string_view symbol) const;
    const std::vector<std::pair<std::string, PhonemeVector>>& entries() const {
        return rows_;
    }
    std::size_t size() const { return rows_.size(); }

private:
    PhonemeTable() = default;
    void add(std::string symbol, PhonemeVector v);

    std::vector<std::pair<std::string, PhonemeVector>> rows_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

// word (lowercase) -> ARPAbet sequence, stress digits stripped.
class PronouncingLexicon {
public:
    // Static lexicon covering every word the shipped experiment designs use.
    static PronouncingLexicon builtin();

    // File format: one entry per line, "word<TAB>SYM SYM SYM"; lines starting
    // with ';' are comments. Entries override existing ones.
    void merge_file(const std::filesystem::path& path,
                    const PhonemeTable& table = PhonemeTable::builtin());
    static PronouncingLexicon from_file(
        const std::filesystem::path& path,
        const PhonemeTable& table = PhonemeTable::builtin());

    void add(std::string word, std::vector<std::string> symbols);
    bool contains(std::string_view word) const;
    const std::vector<std::string>& phonemes_of(std::string_view word) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

std::vector<std::string> word_to_phonemes(const PronouncingLexicon& lexicon,
                                          std::string_view word);

const PhonemeVector& phoneme_to_vector(const PhonemeTable& table,
                                       std::string_view symbol);

// Concatenated per-word phoneme vectors, with one silent '#' vector inserted
// between consecutive words.
std::vector<PhonemeVector> encode_word_sequence(const PronouncingLexicon& lexicon,
                                                const PhonemeTable& table,
                                                std::span<const std::string> words);

}  // namespace wordmap
