#include "wordmap/phoneme.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "wordmap/errors.hpp"

namespace wordmap {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string strip_stress(std::string_view symbol) {
    std::string out(symbol);
    while (!out.empty() && std::isdigit(static_cast<unsigned char>(out.back())))
        out.pop_back();
    return out;
}

}  // namespace

void PhonemeTable::add(std::string symbol, PhonemeVector v) {
    index_.emplace(symbol, rows_.size());
    rows_.emplace_back(std::move(symbol), v);
}

bool PhonemeTable::contains(std::string_view symbol) const {
    return index_.find(symbol) != index_.end();
}

const PhonemeVector& PhonemeTable::vector_of(std::string_view symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end())
        throw_data("unknown phoneme symbol '" + std::string(symbol) + "'");
    return rows_[it->second].second;
}

const PhonemeTable& PhonemeTable::builtin() {
    static const PhonemeTable table = [] {
        PhonemeTable t;
        // Vowels: components 1-4, consonant block zero.
        t.add("AA", {1, 0.5, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("AE", {1, -0.5, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("AH", {0.67, 0, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("AO", {0.33, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("AW", {0, 0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("AY", {0, 0, -0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("EH", {0.33, -0.5, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("ER", {0.33, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("IH", {-0.67, -0.5, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("IY", {-1, -1, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("OY", {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("OW", {-0.33, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("EY", {-0.33, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("UH", {-0.67, 0.5, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        t.add("UW", {-1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0});
        // Consonants: components 5-12, vowel block zero.
        t.add("B", {0, 0, 0, 0, 1, -1, 1, -1, 1, -1, -1, -1});
        t.add("CH", {0, 0, 0, 0, 0.27, -1, -1, 0, -1, -1, -1, -1});
        t.add("D", {0, 0, 0, 0, 0.45, -1, 1, -1, 1, -1, -1, -1});
        t.add("DH", {0, 0, 0, 0, 0.64, -1, -1, 1, 1, -1, -1, -1});
        t.add("F", {0, 0, 0, 0, 0.82, -1, -1, 1, -1, -1, -1, -1});
        t.add("G", {0, 0, 0, 0, -0.27, -1, 1, -1, 1, -1, -1, -1});
        t.add("HH", {0, 0, 0, 0, -1, -1, -1, 1, 0, -1, -1, -1});
        t.add("JH", {0, 0, 0, 0, 0.45, -1, -1, 0, 1, -1, -1, -1});
        t.add("K", {0, 0, 0, 0, -0.27, -1, 1, -1, -1, -1, -1, -1});
        t.add("L", {0, 0, 0, 0, 0.45, -1, -1, -1, 1, -1, -1, 1});
        t.add("M", {0, 0, 0, 0, 1, 1, -1, -1, 1, -1, -1, -1});
        t.add("N", {0, 0, 0, 0, 0.45, 1, -1, -1, 1, -1, -1, -1});
        t.add("NG", {0, 0, 0, 0, -0.27, 1, -1, -1, 1, -1, -1, -1});
        t.add("P", {0, 0, 0, 0, 1, -1, 1, -1, -1, -1, -1, -1});
        t.add("R", {0, 0, 0, 0, 0.27, -1, -1, -1, 1, -1, 1, -1});
        t.add("S", {0, 0, 0, 0, 0.45, -1, -1, 1, -1, -1, -1, -1});
        t.add("SH", {0, 0, 0, 0, 0.27, -1, -1, 1, -1, -1, -1, -1});
        t.add("T", {0, 0, 0, 0, 0.45, -1, 1, -1, -1, -1, -1, -1});
        t.add("TH", {0, 0, 0, 0, 0.64, -1, -1, 1, -1, -1, -1, -1});
        t.add("V", {0, 0, 0, 0, 0.82, -1, -1, 1, 1, -1, -1, -1});
        t.add("W", {0, 0, 0, 0, 1, -1, -1, -1, 1, 1, -1, -1});
        t.add("Y", {0, 0, 0, 0, -0.09, -1, -1, -1, 1, 1, -1, -1});
        t.add("Z", {0, 0, 0, 0, 0.45, -1, -1, 1, 1, -1, -1, -1});
        t.add("ZH", {0, 0, 0, 0, 0.27, -1, -1, 1, 1, -1, -1, -1});
        // Silent marker, used as word separator.
        t.add("#", {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        return t;
    }();
    return table;
}

void PronouncingLexicon::add(std::string word, std::vector<std::string> symbols) {
    if (word.empty()) throw_data("lexicon entry with empty word");
    if (symbols.empty()) throw_data("lexicon entry '" + word + "' has no phonemes");
    entries_[lowercase(word)] = std::move(symbols);
}

bool PronouncingLexicon::contains(std::string_view word) const {
    return entries_.find(lowercase(word)) != entries_.end();
}

const std::vector<std::string>& PronouncingLexicon::phonemes_of(
    std::string_view word) const {
    auto it = entries_.find(lowercase(word));
    if (it == entries_.end())
        throw_data("word '" + std::string(word) + "' not in pronouncing lexicon");
    return it->second;
}

void PronouncingLexicon::merge_file(const std::filesystem::path& path,
                                    const PhonemeTable& table) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open lexicon file '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == ';') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw_data(path.string() + ":" + std::to_string(line_no) +
                       ": expected 'word<TAB>SYM SYM ...'");
        const std::string word = lowercase(line.substr(0, tab));
        std::istringstream rest(line.substr(tab + 1));
        std::vector<std::string> symbols;
        std::string sym;
        while (rest >> sym) {
            sym = strip_stress(sym);
            if (!table.contains(sym))
                throw_data(path.string() + ":" + std::to_string(line_no) +
                           ": unknown phoneme symbol '" + sym + "'");
            symbols.push_back(std::move(sym));
        }
        if (word.empty() || symbols.empty())
            throw_data(path.string() + ":" + std::to_string(line_no) +
                       ": malformed lexicon entry");
        entries_[word] = std::move(symbols);
    }
}

PronouncingLexicon PronouncingLexicon::from_file(const std::filesystem::path& path,
                                                 const PhonemeTable& table) {
    PronouncingLexicon lex;
    lex.merge_file(path, table);
    return lex;
}

PronouncingLexicon PronouncingLexicon::builtin() {
    // Extracted once from CMUdict (first pronunciation, stress stripped).
    static const std::pair<const char*, const char*> kEntries[] = {
        {"armoire", "AA R M W AA R"},
        {"ball", "B AO L"},
        {"bed", "B EH D"},
        {"blender", "B L EH N D ER"},
        {"bowl", "B OW L"},
        {"canister", "K AE N AH S T ER"},
        {"cat", "K AE T"},
        {"chair", "CH EH R"},
        {"cheese", "CH IY Z"},
        {"clock", "K L AA K"},
        {"computer", "K AH M P Y UW T ER"},
        {"cooker", "K UH K ER"},
        {"crib", "K R IH B"},
        {"cup", "K AH P"},
        {"desk", "D EH S K"},
        {"dog", "D AO G"},
        {"door", "D AO R"},
        {"dresser", "D R EH S ER"},
        {"fork", "F AO R K"},
        {"goblet", "G AA B L AH T"},
        {"keyboard", "K IY B AO R D"},
        {"knife", "N AY F"},
        {"mat", "M AE T"},
        {"mixer", "M IH K S ER"},
        {"monitor", "M AA N AH T ER"},
        {"mouse", "M AW S"},
        {"notebook", "N OW T B UH K"},
        {"printer", "P R IH N T ER"},
        {"rasp", "R AE S P"},
        {"refrigerator", "R AH F R IH JH ER EY T ER"},
        {"shaker", "SH EY K ER"},
        {"snake", "S N EY K"},
        {"sofa", "S OW F AH"},
        {"speaker", "S P IY K ER"},
        {"spoon", "S P UW N"},
        {"telephone", "T EH L AH F OW N"},
        {"trap", "T R AE P"},
    };
    PronouncingLexicon lex;
    for (const auto& [word, syms] : kEntries) {
        std::istringstream in(syms);
        std::vector<std::string> symbols;
        std::string s;
        while (in >> s) symbols.push_back(s);
        lex.add(word, std::move(symbols));
    }
    return lex;
}

std::vector<std::string> word_to_phonemes(const PronouncingLexicon& lexicon,
                                          std::string_view word) {
    return lexicon.phonemes_of(word);
}

const PhonemeVector& phoneme_to_vector(const PhonemeTable& table,
                                       std::string_view symbol) {
    return table.vector_of(symbol);
}

std::vector<PhonemeVector> encode_word_sequence(const PronouncingLexicon& lexicon,
                                                const PhonemeTable& table,
                                                std::span<const std::string> words) {
    std::vector<PhonemeVector> out;
    const PhonemeVector* silent = nullptr;
    for (std::size_t w = 0; w < words.size(); ++w) {
        if (w > 0) {
            if (!silent) silent = &table.vector_of("#");
            out.push_back(*silent);
        }
        for (const std::string& sym : lexicon.phonemes_of(words[w]))
            out.push_back(table.vector_of(sym));
    }
    return out;
}

}  // namespace wordmap
