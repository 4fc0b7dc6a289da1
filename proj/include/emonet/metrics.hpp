#pragma once

#include <array>
#include <vector>

#include "emonet/graph.hpp"
#include "emonet/lexicon.hpp"

namespace emonet {

// Network-level cohesion measures over the emotion wheel. Each ordered word
// pair contributes its symmetrized weight normalized by the scale maximum,
// (L(w1,w2) + L(w2,w1)) / (2 * e_max); petal means are averaged over the 8
// petals. `locality` uses the within-petal pairs, `globality` the pairs into
// the opposite petal.

struct LocalityReport {
    std::array<double, 8> per_petal_locality{};
    std::array<double, 8> per_petal_globality{};
    double locality = 0.0;
    double globality = 0.0;
    double e_max = 0.0;
};

double locality(const SemanticNetwork& net, const Wheel& wheel);
double globality(const SemanticNetwork& net, const Wheel& wheel);
LocalityReport locality_report(const SemanticNetwork& net, const Wheel& wheel);

// Per-pair normalized values backing the two measures, enumerated petal by
// petal in pair-set order: 48 within-petal values, 72 cross-petal values.
// These are the matched samples compared across tasks.
std::vector<double> within_pair_values(const SemanticNetwork& net, const Wheel& wheel);
std::vector<double> cross_pair_values(const SemanticNetwork& net, const Wheel& wheel);

enum class NmiNorm {
    mean_entropy,  // 2 I(A;B) / (H(A) + H(B))
    max_entropy,   // I(A;B) / max(H(A), H(B))
};

// Normalized mutual information between two labelings of the same domain
// (natural logarithms). Conventions: if both entropies are zero the
// partitions are identical up to relabeling and NMI is 1; if exactly one is
// zero, NMI is 0. Throws when the domains differ or are empty.
double nmi(const Partition& a, const Partition& b, NmiNorm norm = NmiNorm::mean_entropy);

}  // namespace emonet
