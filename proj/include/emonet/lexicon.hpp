#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace emonet {

// Fixed emotion-word vocabulary: 8 primary emotions, their stronger and
// weaker variants (together the 24 "petal" words of the emotion wheel), and
// 24 secondary words that sit between or outside the petals.

enum class WordCategory {
    primary,
    strong_derived,
    weak_derived,
    secondary,
};

const char* category_name(WordCategory c);
std::optional<WordCategory> category_from_name(const std::string& name);

struct EmotionWord {
    int id = -1;
    std::string english;
    std::string romaji;
    WordCategory category = WordCategory::secondary;
};

// One petal of the wheel: a primary word flanked by its strong and weak
// variants (e.g. terror / fear / apprehension).
struct Petal {
    int strong = -1;
    int primary = -1;
    int weak = -1;

    std::array<int, 3> members() const { return {strong, primary, weak}; }
    bool contains(int word_id) const {
        return word_id == strong || word_id == primary || word_id == weak;
    }
};

// The eight petals in wheel order plus the fixed opposition pairing
// (joy/sadness, trust/disgust, fear/anger, surprise/anticipation); petals
// k and k+4 face each other.
struct Wheel {
    std::array<Petal, 8> petals;

    static int opposite(int k) { return (k + 4) % 8; }

    // Petal index of a word, or -1 for secondary words.
    int petal_of(int word_id) const {
        for (int k = 0; k < 8; ++k) {
            if (petals[static_cast<std::size_t>(k)].contains(word_id)) return k;
        }
        return -1;
    }
};

// A labeling of word ids with community labels. The mapped key set is the
// partition's domain; two partitions are only comparable on a shared domain.
class Partition {
public:
    void assign(int id, int label) { labels_[id] = label; }

    bool contains(int id) const { return labels_.count(id) != 0; }

    int label(int id) const { return labels_.at(id); }

    const std::map<int, int>& labels() const { return labels_; }

    std::vector<int> domain() const {
        std::vector<int> ids;
        ids.reserve(labels_.size());
        for (const auto& [id, label] : labels_) ids.push_back(id);
        return ids;
    }

    std::size_t size() const { return labels_.size(); }

    bool operator==(const Partition& other) const = default;

private:
    std::map<int, int> labels_;
};

class EmotionLexicon {
public:
    EmotionLexicon(std::vector<EmotionWord> words, Wheel wheel);

    std::size_t size() const { return words_.size(); }
    const std::vector<EmotionWord>& words() const { return words_; }
    const EmotionWord& word(int id) const;
    const Wheel& wheel() const { return wheel_; }

    // Lookup by english label; nullopt when the word is not in the table.
    std::optional<int> find(const std::string& english) const;

private:
    std::vector<EmotionWord> words_;
    Wheel wheel_;
    std::unordered_map<std::string, int> by_english_;
};

// The built-in 48-word vocabulary (ids 0..47: primaries first, then strong
// variants, weak variants, and secondary words).
const EmotionLexicon& builtin_lexicon();

// Reference partition of the 24 petal words into their 8 petals, labeled by
// petal index.
Partition wheel_partition(const Wheel& wheel);

// Ordered word pairs used by the cohesion measures for petal k: `within` are
// the 6 ordered pairs of distinct words inside the petal, `cross` the 9
// ordered pairs from petal k into its opposite petal.
struct PairSets {
    std::vector<std::pair<int, int>> within;
    std::vector<std::pair<int, int>> cross;
};

PairSets petal_pair_sets(const Wheel& wheel, int k);

// Plain-text table round trip (one `id,english,romaji,category,petal` row
// per word, UTF-8, '#' comments allowed).
EmotionLexicon load_lexicon(std::istream& in);
void save_lexicon(const EmotionLexicon& lexicon, std::ostream& out);

}  // namespace emonet
