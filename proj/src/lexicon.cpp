#include "emonet/lexicon.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "emonet/error.hpp"

namespace emonet {

namespace {

struct WordRow {
    int id;
    const char* english;
    const char* romaji;
    WordCategory category;
};

constexpr WordCategory kPrimary = WordCategory::primary;
constexpr WordCategory kStrong = WordCategory::strong_derived;
constexpr WordCategory kWeak = WordCategory::weak_derived;
constexpr WordCategory kSecondary = WordCategory::secondary;

// ids 0-7: primary emotions in wheel order; 8-15: strong variants; 16-23:
// weak variants; 24-47: secondary words. The wheel order pairs petal k with
// petal k+4 as opposites.
const WordRow kWords[] = {
    {0, "joy", "yorokobi", kPrimary},
    {1, "trust", "shinrai", kPrimary},
    {2, "fear", "osore", kPrimary},
    {3, "surprise", "odoroki", kPrimary},
    {4, "sadness", "kanashimi", kPrimary},
    {5, "disgust", "kenno", kPrimary},
    {6, "anger", "ikari", kPrimary},
    {7, "anticipation", "kitai", kPrimary},
    {8, "ecstasy", "koukotsu", kStrong},
    {9, "admiration", "kantan", kStrong},
    {10, "terror", "kyouhu", kStrong},
    {11, "amazement", "kyoutan", kStrong},
    {12, "grief", "hituu", kStrong},
    {13, "loathing", "zouo", kStrong},
    {14, "rage", "gekido", kStrong},
    {15, "vigilance", "keikai", kStrong},
    {16, "serenity", "heion", kWeak},
    {17, "acceptance", "younin", kWeak},
    {18, "apprehension", "shinpai", kWeak},
    {19, "distraction", "douyou", kWeak},
    {20, "pensiveness", "urei", kWeak},
    {21, "boredom", "taikutsu", kWeak},
    {22, "annoyance", "iradachi", kWeak},
    {23, "interest", "kyoumi", kWeak},
    {24, "optimism", "rakkan", kSecondary},
    {25, "hope", "kibou", kSecondary},
    {26, "anxiety", "huan", kSecondary},
    {27, "love", "ai", kSecondary},
    {28, "guilt", "zaiakukan", kSecondary},
    {29, "delight", "kanki", kSecondary},
    {30, "submission", "hukuju", kSecondary},
    {31, "curiosity", "koukishin", kSecondary},
    {32, "sentimentality", "kansyou", kSecondary},
    {33, "awe", "ikei", kSecondary},
    {34, "despair", "zetsubou", kSecondary},
    {35, "shame", "haji", kSecondary},
    {36, "disappointment", "shitsubou", kSecondary},
    {37, "unbelief", "hushin", kSecondary},
    {38, "outrage", "hungai", kSecondary},
    {39, "remorse", "jiseki", kSecondary},
    {40, "envy", "syokubou", kSecondary},
    {41, "pessimism", "hikan", kSecondary},
    {42, "contempt", "keibetsu", kSecondary},
    {43, "cynicism", "reisyou", kSecondary},
    {44, "morbidness", "innutsu", kSecondary},
    {45, "aggressiveness", "sekkyokusei", kSecondary},
    {46, "pride", "hokori", kSecondary},
    {47, "dominance", "yuui", kSecondary},
};

[[noreturn]] void fail(const std::string& msg) { throw Error(Stage::config, msg); }

void validate(const std::vector<EmotionWord>& words, const Wheel& wheel) {
    if (words.empty()) fail("lexicon: empty word table");
    std::size_t counts[4] = {0, 0, 0, 0};
    std::unordered_map<std::string, int> seen;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (w.id != static_cast<int>(i)) {
            fail("lexicon: word ids must be contiguous from 0; got id " +
                 std::to_string(w.id) + " at position " + std::to_string(i));
        }
        if (w.english.empty()) fail("lexicon: word " + std::to_string(w.id) + " has no label");
        if (!seen.emplace(w.english, w.id).second) {
            fail("lexicon: duplicate word label '" + w.english + "'");
        }
        counts[static_cast<std::size_t>(w.category)]++;
    }
    if (counts[0] != 8 || counts[1] != 8 || counts[2] != 8) {
        fail("lexicon: expected 8 words in each wheel category");
    }
    // Every non-secondary word sits in exactly one petal slot matching its
    // category, and each petal has all three slots filled.
    std::vector<int> petal_hits(words.size(), 0);
    for (int k = 0; k < 8; ++k) {
        const Petal& petal = wheel.petals[static_cast<std::size_t>(k)];
        for (int id : petal.members()) {
            if (id < 0 || id >= static_cast<int>(words.size())) {
                fail("lexicon: petal " + std::to_string(k) + " references unknown word id");
            }
            petal_hits[static_cast<std::size_t>(id)]++;
        }
        if (words[static_cast<std::size_t>(petal.primary)].category != kPrimary ||
            words[static_cast<std::size_t>(petal.strong)].category != kStrong ||
            words[static_cast<std::size_t>(petal.weak)].category != kWeak) {
            fail("lexicon: petal " + std::to_string(k) + " slots disagree with word categories");
        }
    }
    for (const auto& w : words) {
        const int hits = petal_hits[static_cast<std::size_t>(w.id)];
        const bool on_wheel = w.category != kSecondary;
        if (on_wheel && hits != 1) {
            fail("lexicon: wheel word '" + w.english + "' must appear in exactly one petal");
        }
        if (!on_wheel && hits != 0) {
            fail("lexicon: secondary word '" + w.english + "' cannot sit on a petal");
        }
    }
}

Wheel builtin_wheel() {
    Wheel wheel;
    for (int k = 0; k < 8; ++k) {
        wheel.petals[static_cast<std::size_t>(k)] = Petal{8 + k, k, 16 + k};
    }
    return wheel;
}

}  // namespace

const char* category_name(WordCategory c) {
    switch (c) {
        case WordCategory::primary: return "primary";
        case WordCategory::strong_derived: return "strong";
        case WordCategory::weak_derived: return "weak";
        case WordCategory::secondary: return "secondary";
    }
    return "secondary";
}

std::optional<WordCategory> category_from_name(const std::string& name) {
    if (name == "primary") return WordCategory::primary;
    if (name == "strong") return WordCategory::strong_derived;
    if (name == "weak") return WordCategory::weak_derived;
    if (name == "secondary") return WordCategory::secondary;
    return std::nullopt;
}

EmotionLexicon::EmotionLexicon(std::vector<EmotionWord> words, Wheel wheel)
    : words_(std::move(words)), wheel_(wheel) {
    validate(words_, wheel_);
    for (const auto& w : words_) by_english_[w.english] = w.id;
}

const EmotionWord& EmotionLexicon::word(int id) const {
    if (id < 0 || id >= static_cast<int>(words_.size())) {
        throw Error(Stage::config, "lexicon: word id " + std::to_string(id) + " out of range");
    }
    return words_[static_cast<std::size_t>(id)];
}

std::optional<int> EmotionLexicon::find(const std::string& english) const {
    auto it = by_english_.find(english);
    if (it == by_english_.end()) return std::nullopt;
    return it->second;
}

const EmotionLexicon& builtin_lexicon() {
    static const EmotionLexicon lexicon = [] {
        std::vector<EmotionWord> words;
        words.reserve(std::size(kWords));
        for (const auto& row : kWords) {
            words.push_back({row.id, row.english, row.romaji, row.category});
        }
        return EmotionLexicon(std::move(words), builtin_wheel());
    }();
    return lexicon;
}

Partition wheel_partition(const Wheel& wheel) {
    Partition partition;
    for (int k = 0; k < 8; ++k) {
        for (int id : wheel.petals[static_cast<std::size_t>(k)].members()) {
            partition.assign(id, k);
        }
    }
    return partition;
}

PairSets petal_pair_sets(const Wheel& wheel, int k) {
    if (k < 0 || k >= 8) {
        throw Error(Stage::config, "petal_pair_sets: petal index " + std::to_string(k) +
                                       " out of range");
    }
    PairSets sets;
    const auto own = wheel.petals[static_cast<std::size_t>(k)].members();
    const auto other = wheel.petals[static_cast<std::size_t>(Wheel::opposite(k))].members();
    for (int a : own) {
        for (int b : own) {
            if (a != b) sets.within.emplace_back(a, b);
        }
    }
    for (int a : own) {
        for (int b : other) sets.cross.emplace_back(a, b);
    }
    return sets;
}

EmotionLexicon load_lexicon(std::istream& in) {
    std::vector<EmotionWord> words;
    std::vector<std::array<int, 3>> petal_slots(8, {-1, -1, -1});  // strong, primary, weak
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        std::stringstream ss(trimmed);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 4 && fields.size() != 5) {
            throw Error(Stage::parse, "lexicon line " + std::to_string(line_no) +
                                          ": expected id,english,romaji,category[,petal]");
        }
        EmotionWord w;
        try {
            w.id = std::stoi(fields[0]);
        } catch (const std::exception&) {
            throw Error(Stage::parse,
                        "lexicon line " + std::to_string(line_no) + ": bad word id");
        }
        w.english = fields[1];
        w.romaji = fields[2];
        auto cat = category_from_name(fields[3]);
        if (!cat) {
            throw Error(Stage::parse, "lexicon line " + std::to_string(line_no) +
                                          ": unknown category '" + fields[3] + "'");
        }
        w.category = *cat;
        if (w.category != WordCategory::secondary) {
            if (fields.size() != 5 || fields[4].empty()) {
                throw Error(Stage::parse, "lexicon line " + std::to_string(line_no) +
                                              ": wheel word needs a petal index");
            }
            int petal = -1;
            try {
                petal = std::stoi(fields[4]);
            } catch (const std::exception&) {
                throw Error(Stage::parse,
                            "lexicon line " + std::to_string(line_no) + ": bad petal index");
            }
            if (petal < 0 || petal >= 8) {
                throw Error(Stage::parse, "lexicon line " + std::to_string(line_no) +
                                              ": petal index out of range");
            }
            const int slot = (w.category == WordCategory::strong_derived) ? 0
                             : (w.category == WordCategory::primary)      ? 1
                                                                          : 2;
            petal_slots[static_cast<std::size_t>(petal)][static_cast<std::size_t>(slot)] = w.id;
        }
        words.push_back(std::move(w));
    }
    Wheel wheel;
    for (int k = 0; k < 8; ++k) {
        const auto& slots = petal_slots[static_cast<std::size_t>(k)];
        wheel.petals[static_cast<std::size_t>(k)] = Petal{slots[0], slots[1], slots[2]};
    }
    return EmotionLexicon(std::move(words), wheel);
}

void save_lexicon(const EmotionLexicon& lexicon, std::ostream& out) {
    out << "# id,english,romaji,category,petal\n";
    for (const auto& w : lexicon.words()) {
        out << w.id << ',' << w.english << ',' << w.romaji << ',' << category_name(w.category);
        const int petal = lexicon.wheel().petal_of(w.id);
        if (petal >= 0) out << ',' << petal;
        out << '\n';
    }
}

}  // namespace emonet
