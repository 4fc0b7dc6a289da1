#pragma once

#include <cstdint>

#include "emonet/graph.hpp"
#include "emonet/ingest.hpp"
#include "emonet/lexicon.hpp"

namespace emonet {

// Synthetic rating corpora with a planted wheel structure, used for recovery
// benchmarks and pipeline tests. Base scores depend only on where a word
// pair sits on the wheel: inside one petal, across opposite petals, or
// anything else (secondary words always fall in the last bucket). Observed
// scores are clamp(round(base + gaussian noise), 0..7).
struct PlantedModel {
    double base_within = 6.0;
    double base_opposite = 1.0;
    double base_other = 2.0;
    double noise_sd = 1.0;
    double careless_rate = 0.0;  // fraction answering uniformly at random
    std::uint64_t seed = 1;
};

// Generates complete sessions: each participant answers a contiguous block
// of the shuffled ordered-pair list (wrapping around, so enough participants
// cover every pair), plus 2 catch rows at random positions and 20 repeat
// rows re-asking earlier questions. Careless participants answer everything
// uniformly and obey each catch instruction only with probability 1/2.
// Generation is deterministic in (model, participants, task, block_size).
std::vector<Session> generate(const PlantedModel& model, const EmotionLexicon& lexicon,
                              std::size_t participants, TaskKind task,
                              std::size_t block_size = 120);

// The ground-truth labeling the generator plants: the wheel partition.
Partition planted_partition(const Wheel& wheel);

// Network-level shortcut for decomposition benchmarks: the 24 petal words
// with within-petal weights near `base_within` (clamped to [0, e_max]) and
// all other weights drawn in [0, other_cap], gaussian noise on both.
SemanticNetwork planted_network(const Wheel& wheel, double base_within, double other_cap,
                                double noise_sd, std::uint64_t seed, double e_max = 7.0);

}  // namespace emonet
