#include "emonet/synth.hpp"

#include <algorithm>
#include <cmath>

#include "emonet/error.hpp"
#include "emonet/rng.hpp"

namespace emonet {

namespace {

int clamp_score(double value) {
    const double rounded = std::round(value);
    if (rounded < 0.0) return 0;
    if (rounded > 7.0) return 7;
    return static_cast<int>(rounded);
}

double base_score(const PlantedModel& model, const Wheel& wheel, int word_a, int word_b) {
    const int pa = wheel.petal_of(word_a);
    const int pb = wheel.petal_of(word_b);
    if (pa < 0 || pb < 0) return model.base_other;
    if (pa == pb) return model.base_within;
    if (Wheel::opposite(pa) == pb) return model.base_opposite;
    return model.base_other;
}

}  // namespace

std::vector<Session> generate(const PlantedModel& model, const EmotionLexicon& lexicon,
                              std::size_t participants, TaskKind task,
                              std::size_t block_size) {
    if (participants == 0) throw Error(Stage::config, "generate: need at least one participant");
    if (block_size < 20) {
        throw Error(Stage::config, "generate: block_size must be >= 20 to allow 20 repeats");
    }
    if (model.noise_sd < 0.0 || model.careless_rate < 0.0 || model.careless_rate > 1.0) {
        throw Error(Stage::config, "generate: invalid noise_sd or careless_rate");
    }
    for (const double base : {model.base_within, model.base_opposite, model.base_other}) {
        if (base < 0.0 || base > 7.0) {
            throw Error(Stage::config, "generate: base score levels must sit in [0, 7]");
        }
    }
    const Wheel& wheel = lexicon.wheel();
    const std::size_t n = lexicon.size();

    // One shuffled list of all ordered pairs, shared by every participant.
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(n * (n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    Rng master(model.seed);
    master.shuffle(pairs);
    if (block_size > pairs.size()) block_size = pairs.size();

    std::vector<Session> sessions;
    sessions.reserve(participants);
    for (std::size_t p = 0; p < participants; ++p) {
        // Per-participant stream, independent of how many participants exist.
        Rng rng = master.derive(p);
        const bool careless = rng.uniform() < model.careless_rate;

        Session session;
        session.participant = "p" + std::to_string(p + 1);
        session.task = task;
        session.complete = true;

        const std::size_t start = (p * block_size) % pairs.size();
        std::vector<RatingRecord> normals;
        normals.reserve(block_size);
        for (std::size_t q = 0; q < block_size; ++q) {
            const auto& [a, b] = pairs[(start + q) % pairs.size()];
            RatingRecord rec;
            rec.kind = RecordKind::normal;
            rec.word_a = a;
            rec.word_b = b;
            rec.score = careless ? static_cast<int>(rng.uniform_int(8))
                                 : clamp_score(base_score(model, wheel, a, b) +
                                               model.noise_sd * rng.gaussian());
            normals.push_back(rec);
        }

        // 20 distinct earlier questions get asked a second time.
        std::vector<std::size_t> indices(normals.size());
        for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
        rng.shuffle(indices);
        indices.resize(20);
        std::sort(indices.begin(), indices.end());
        std::vector<RatingRecord> repeats;
        repeats.reserve(20);
        for (std::size_t idx : indices) {
            RatingRecord rec;
            rec.kind = RecordKind::repeat;
            rec.word_a = normals[idx].word_a;
            rec.word_b = normals[idx].word_b;
            rec.repeat_of = static_cast<int>(idx);  // rewritten to order below
            rec.score = careless
                            ? static_cast<int>(rng.uniform_int(8))
                            : clamp_score(base_score(model, wheel, rec.word_a, rec.word_b) +
                                          model.noise_sd * rng.gaussian());
            repeats.push_back(rec);
        }

        RatingRecord catches[2];
        for (auto& rec : catches) {
            rec.kind = RecordKind::catch_trial;
            rec.catch_target = static_cast<int>(rng.uniform_int(8));
            const bool obeys = !careless || rng.uniform() < 0.5;
            rec.score = obeys ? rec.catch_target : static_cast<int>(rng.uniform_int(8));
        }

        // Lay out the session: normals in block order, repeats appended (a
        // second pass over earlier questions), catch rows spliced in at
        // random positions.
        std::vector<RatingRecord> layout;
        layout.reserve(normals.size() + repeats.size() + 2);
        for (auto& rec : normals) layout.push_back(rec);
        // repeat_of currently indexes `normals`; the normal rows keep their
        // layout position as presentation order below.
        for (auto& rec : repeats) layout.push_back(rec);
        for (auto& rec : catches) {
            const std::size_t pos = rng.uniform_int(layout.size() + 1);
            layout.insert(layout.begin() + static_cast<std::ptrdiff_t>(pos), rec);
        }
        // Assign presentation order and resolve repeat references.
        std::vector<int> normal_order(normals.size(), -1);
        int next_order = 0;
        std::size_t normal_seen = 0;
        for (auto& rec : layout) {
            rec.order = next_order++;
            if (rec.kind == RecordKind::normal) {
                normal_order[normal_seen++] = rec.order;
            }
        }
        for (auto& rec : layout) {
            if (rec.kind == RecordKind::repeat) {
                rec.repeat_of = normal_order[static_cast<std::size_t>(rec.repeat_of)];
            }
        }
        session.records = std::move(layout);
        sessions.push_back(std::move(session));
    }
    return sessions;
}

Partition planted_partition(const Wheel& wheel) { return wheel_partition(wheel); }

SemanticNetwork planted_network(const Wheel& wheel, double base_within, double other_cap,
                                double noise_sd, std::uint64_t seed, double e_max) {
    SemanticNetwork net;
    for (int k = 0; k < 8; ++k) {
        for (int id : wheel.petals[static_cast<std::size_t>(k)].members()) {
            net.words.push_back(id);
        }
    }
    net.n = net.words.size();
    net.e_max = e_max;
    net.weights = Matrix(net.n, net.n, 0.0);
    Rng rng(seed);
    for (std::size_t i = 0; i < net.n; ++i) {
        for (std::size_t j = 0; j < net.n; ++j) {
            if (i == j) continue;
            const bool same_petal =
                wheel.petal_of(net.words[i]) == wheel.petal_of(net.words[j]);
            double w;
            if (same_petal) {
                w = std::clamp(base_within + noise_sd * rng.gaussian(), 0.0, e_max);
            } else {
                w = std::clamp(0.5 * other_cap + noise_sd * rng.gaussian(), 0.0, other_cap);
            }
            net.weights(i, j) = w;
        }
    }
    return net;
}

}  // namespace emonet
