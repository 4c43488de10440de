#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "wordmap/errors.hpp"
#include "wordmap/experiments.hpp"

namespace wordmap {

namespace {

std::vector<std::string> split_words(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string join_words(std::span<const std::string> words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += words[i];
    }
    return out;
}

void require(bool cond, const std::string& message) {
    if (!cond) throw_data("design: " + message);
}

void require_distinct(std::span<const std::string> items, const std::string& what) {
    std::set<std::string> seen(items.begin(), items.end());
    require(seen.size() == items.size(), what + " contains duplicates");
}

}  // namespace

void ExperimentDesign::validate() const {
    require(!id.empty(), "missing id");
    require(participants >= 1, "participants must be >= 1");
    require(pair_occurrences >= 1, "pair_occurrences must be >= 1");

    if (family == "exp1") {
        require(condition_size >= 2, "exp1 requires condition_size >= 2");
        require(words.size() >= static_cast<std::size_t>(condition_size),
                "exp1 needs at least condition_size words");
        require_distinct(words, "words");
        require((words.size() * static_cast<std::size_t>(pair_occurrences)) %
                        static_cast<std::size_t>(condition_size) ==
                    0,
                "words * pair_occurrences must be divisible by condition_size");
        require(test_choices == 4, "rank tests are four-alternative");
        require(words.size() >= static_cast<std::size_t>(test_choices),
                "need at least test_choices referents");
    } else if (family == "exp2" || family == "exp3" || family == "exp4") {
        require(single_words.size() == 6 && double_words.size() == 6,
                family + " requires 6 single and 6 double words");
        require(double_second_referents.size() == double_words.size(),
                "double_second_referents must parallel double_words");
        if (family == "exp2") {
            require(noise_words.size() == 6, "exp2 requires 6 noise words");
            require(pair_occurrences == 6,
                    "exp2's 2/14/11 trial mix assumes 6 co-occurrences");
        } else {
            require(noise_words.empty(), family + " does not use noise words");
            require((single_words.size() * pair_occurrences +
                     double_words.size() * 2 * pair_occurrences) %
                            4 ==
                        0,
                    "token count must fill 4-word trials exactly");
        }
        std::vector<std::string> all_words = single_words;
        all_words.insert(all_words.end(), double_words.begin(), double_words.end());
        all_words.insert(all_words.end(), noise_words.begin(), noise_words.end());
        require_distinct(all_words, "word lists");
        std::vector<std::string> refs = referent_objects();
        require_distinct(refs, "referent objects");
        require(test_choices == 4, "rank tests are four-alternative");
    } else if (family == "exp5") {
        require(cycles >= 1, "exp5 requires cycles >= 1");
        require(referents_per_trial >= 2, "exp5 requires referents_per_trial >= 2");
        require(words.size() >= static_cast<std::size_t>(referents_per_trial),
                "exp5 needs at least referents_per_trial words");
        require_distinct(words, "words");
    } else if (family == "exp6") {
        require(list_a.size() == 6 && list_b.size() == 6,
                "exp6 requires two 6-word lists (ambiguous word excluded)");
        require(!ambiguous_word.empty(), "exp6 requires an ambiguous word");
        require(!referent_a.empty() && !referent_b.empty(),
                "exp6 requires referent_a and referent_b");
        std::vector<std::string> all_words = list_a;
        all_words.insert(all_words.end(), list_b.begin(), list_b.end());
        all_words.push_back(ambiguous_word);
        require_distinct(all_words, "word lists plus ambiguous word");
        require(referent_a != referent_b, "referent_a and referent_b must differ");
        require(cycles >= 2 && cycles % 2 == 0, "exp6 alternates lists: cycles must be even");
        require(trials_per_cycle == 2 * static_cast<int>(list_a.size() + 1),
                "each cycle presents each of the 7 list words twice");
        require(referents_per_trial >= 2 &&
                    referents_per_trial <= static_cast<int>(list_a.size() + 1),
                "referents_per_trial must fit the per-list referent pool");
        require(induction_trials >= 2, "exp6 requires induction trials");
        require(induction_trials - 1 <= static_cast<int>(list_a.size()),
                "longest induction block must fit the list");
        require(induction_choices >= 2 &&
                    induction_choices <= static_cast<int>(list_a.size()),
                "induction_choices must fit the non-ambiguous referent pool");
        require(test_choices == 4, "the ambiguous-label test is four-alternative");
    } else {
        throw_data("design: unknown family '" + family + "' (id '" + id + "')");
    }
}

std::string ExperimentDesign::referent_of(std::string_view word) const {
    // Standard pairs use the same-named object; double words' second referents
    // are separate objects and exp6's ambiguous word maps per list.
    return std::string(word);
}

std::vector<std::string> ExperimentDesign::referent_objects() const {
    std::vector<std::string> out;
    if (family == "exp1" || family == "exp5") {
        out = words;
    } else if (family == "exp2" || family == "exp3" || family == "exp4") {
        out = single_words;
        out.insert(out.end(), double_words.begin(), double_words.end());
        out.insert(out.end(), double_second_referents.begin(),
                   double_second_referents.end());
    } else if (family == "exp6") {
        out = list_a;
        out.insert(out.end(), list_b.begin(), list_b.end());
        out.push_back(referent_a);
        out.push_back(referent_b);
    }
    return out;
}

void ExperimentDesign::write(std::ostream& out) const {
    out << "id = " << id << '\n';
    out << "participants = " << participants << '\n';
    if (family == "exp1") {
        out << "condition_size = " << condition_size << '\n';
        out << "pair_occurrences = " << pair_occurrences << '\n';
        out << "test_choices = " << test_choices << '\n';
        out << "words = " << join_words(words) << '\n';
    } else if (family == "exp2" || family == "exp3" || family == "exp4") {
        out << "pair_occurrences = " << pair_occurrences << '\n';
        out << "test_choices = " << test_choices << '\n';
        out << "single_words = " << join_words(single_words) << '\n';
        out << "double_words = " << join_words(double_words) << '\n';
        out << "double_second_referents = " << join_words(double_second_referents)
            << '\n';
        if (!noise_words.empty()) out << "noise_words = " << join_words(noise_words) << '\n';
    } else if (family == "exp5") {
        out << "cycles = " << cycles << '\n';
        out << "referents_per_trial = " << referents_per_trial << '\n';
        out << "words = " << join_words(words) << '\n';
    } else if (family == "exp6") {
        out << "cycles = " << cycles << '\n';
        out << "trials_per_cycle = " << trials_per_cycle << '\n';
        out << "referents_per_trial = " << referents_per_trial << '\n';
        out << "induction_trials = " << induction_trials << '\n';
        out << "induction_choices = " << induction_choices << '\n';
        out << "test_choices = " << test_choices << '\n';
        out << "list_a = " << join_words(list_a) << '\n';
        out << "list_b = " << join_words(list_b) << '\n';
        out << "ambiguous_word = " << ambiguous_word << '\n';
        out << "referent_a = " << referent_a << '\n';
        out << "referent_b = " << referent_b << '\n';
    }
}

std::string ExperimentDesign::to_string() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

ExperimentDesign ExperimentDesign::parse(std::istream& in, std::string_view source) {
    ExperimentDesign d;
    d.participants = 0;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw_data(std::string(source) + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        line = line.substr(begin);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        auto as_int = [&](const std::string& v) {
            try {
                std::size_t pos = 0;
                const int n = std::stoi(v, &pos);
                if (pos != v.size()) throw std::invalid_argument(v);
                return n;
            } catch (const std::exception&) {
                fail("bad integer '" + v + "' for key '" + key + "'");
            }
            return 0;
        };
        if (key == "id") d.id = value;
        else if (key == "participants") d.participants = as_int(value);
        else if (key == "pair_occurrences") d.pair_occurrences = as_int(value);
        else if (key == "test_choices") d.test_choices = as_int(value);
        else if (key == "condition_size") d.condition_size = as_int(value);
        else if (key == "words") d.words = split_words(value);
        else if (key == "single_words") d.single_words = split_words(value);
        else if (key == "double_words") d.double_words = split_words(value);
        else if (key == "double_second_referents")
            d.double_second_referents = split_words(value);
        else if (key == "noise_words") d.noise_words = split_words(value);
        else if (key == "cycles") d.cycles = as_int(value);
        else if (key == "referents_per_trial") d.referents_per_trial = as_int(value);
        else if (key == "trials_per_cycle") d.trials_per_cycle = as_int(value);
        else if (key == "induction_trials") d.induction_trials = as_int(value);
        else if (key == "induction_choices") d.induction_choices = as_int(value);
        else if (key == "list_a") d.list_a = split_words(value);
        else if (key == "list_b") d.list_b = split_words(value);
        else if (key == "ambiguous_word") d.ambiguous_word = value;
        else if (key == "referent_a") d.referent_a = value;
        else if (key == "referent_b") d.referent_b = value;
        else fail("unknown design key '" + key + "'");
    }
    const auto underscore = d.id.find('_');
    d.family = underscore == std::string::npos ? d.id : d.id.substr(0, underscore);
    d.validate();
    return d;
}

const std::vector<std::string>& design_ids() {
    static const std::vector<std::string> ids = {
        "exp1_2x2", "exp1_3x3", "exp1_4x4", "exp2", "exp3", "exp4", "exp5", "exp6"};
    return ids;
}

ExperimentDesign builtin_design(std::string_view id) {
    static const std::vector<std::string> kHomeWords = {
        "armoire", "bed", "bowl", "canister", "chair", "clock",
        "computer", "cooker", "cup", "desk", "door", "dresser",
        "fork", "knife", "refrigerator", "sofa", "spoon", "telephone"};
    static const std::vector<std::string> kSingle = {"bed", "chair", "bowl",
                                                     "fork", "door", "canister"};
    static const std::vector<std::string> kDouble = {"clock", "computer", "desk",
                                                     "refrigerator", "sofa", "cooker"};
    static const std::vector<std::string> kSecond = {"goblet", "mat", "mixer",
                                                     "crib", "blender", "shaker"};
    static const std::vector<std::string> kNoise = {"spoon", "telephone", "knife",
                                                    "armoire", "cup", "dresser"};

    ExperimentDesign d;
    d.id = std::string(id);
    d.pair_occurrences = 6;
    d.test_choices = 4;
    if (id == "exp1_2x2" || id == "exp1_3x3" || id == "exp1_4x4") {
        d.family = "exp1";
        d.participants = 38;
        d.condition_size = id == "exp1_2x2" ? 2 : id == "exp1_3x3" ? 3 : 4;
        d.words = kHomeWords;
    } else if (id == "exp2") {
        d.family = "exp2";
        d.participants = 48;
        d.single_words = kSingle;
        d.double_words = kDouble;
        d.double_second_referents = kSecond;
        d.noise_words = kNoise;
    } else if (id == "exp3" || id == "exp4") {
        d.family = std::string(id);
        d.participants = 48;
        d.single_words = kSingle;
        d.double_words = kDouble;
        d.double_second_referents = kSecond;
    } else if (id == "exp5") {
        d.family = "exp5";
        d.participants = 50;
        d.cycles = 5;
        d.referents_per_trial = 5;
        d.words = {"bed",      "chair",        "bowl", "fork",   "door",
                   "canister", "clock",        "computer", "desk", "refrigerator",
                   "sofa",     "cooker"};
    } else if (id == "exp6") {
        d.family = "exp6";
        d.participants = 48;
        d.cycles = 6;
        d.trials_per_cycle = 14;
        d.referents_per_trial = 5;
        d.induction_trials = 6;
        d.induction_choices = 4;
        d.list_a = {"armoire", "snake", "dog", "cat", "cheese", "trap"};
        d.list_b = {"speaker", "printer", "computer", "notebook", "monitor", "keyboard"};
        d.ambiguous_word = "mouse";
        d.referent_a = "mouse_animal";
        d.referent_b = "mouse_device";
    } else {
        throw_usage("unknown experiment id '" + std::string(id) + "' (expected one of: " +
                    [] {
                        std::string s;
                        for (const auto& i : design_ids()) {
                            if (!s.empty()) s += ", ";
                            s += i;
                        }
                        return s;
                    }() +
                    ")");
    }
    d.validate();
    return d;
}

ExperimentDesign load_design(const std::filesystem::path& dataset_root,
                             std::string_view id) {
    const auto path = dataset_root / "designs" / (std::string(id) + ".design");
    if (!dataset_root.empty() && std::filesystem::exists(path)) {
        std::ifstream in(path);
        if (!in) throw_data("cannot open design file '" + path.string() + "'");
        return ExperimentDesign::parse(in, path.string());
    }
    return builtin_design(id);
}

std::vector<std::string> experiment_object_names() {
    std::set<std::string> names;
    for (const std::string& id : design_ids()) {
        const ExperimentDesign d = builtin_design(id);
        for (const std::string& obj : d.referent_objects()) names.insert(obj);
    }
    return {names.begin(), names.end()};
}

}  // namespace wordmap
