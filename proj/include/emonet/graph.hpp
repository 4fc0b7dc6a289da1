#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "emonet/lexicon.hpp"
#include "emonet/matrix.hpp"

namespace emonet {

// Weighted directed semantic network. weights(i,j) is the aggregated rating
// given to the ordered pair (word_of(i), word_of(j)); the diagonal is unused
// by every operation. `words` maps node index to lexicon word id.
struct SemanticNetwork {
    std::size_t n = 0;
    std::vector<int> words;
    Matrix weights;
    double e_max = 7.0;

    // Node index carrying a word id, or nullopt when absent.
    std::optional<std::size_t> node_of(int word_id) const {
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (words[i] == word_id) return i;
        }
        return std::nullopt;
    }
};

// Column-stochastic random-walk model over a network. t(i,j) is the
// probability of stepping to node i from node j.
struct MarkovModel {
    Matrix t;
    std::vector<double> p;  // stationary distribution; empty until computed
    double damping = 0.15;
};

struct DissimilarityMatrix {
    Matrix d;
};

// Random-walk transition matrix with uniform teleport:
//   t(i,j) = (1 - damping) * weights(j,i) / out_strength(j) + damping / n
// where out_strength(j) sums weights(j,*) off the diagonal. Columns with
// zero out-strength become uniform. Throws on negative weights or damping
// outside [0, 1].
MarkovModel transition_matrix(const SemanticNetwork& net, double damping = 0.15);

// Stationary distribution by power iteration from the uniform start, stopping
// when the L1 change drops below tol. Throws with the residual when max_iter
// is exhausted first.
std::vector<double> stationary(const MarkovModel& model, double tol = 1e-12,
                               std::size_t max_iter = 10000);

// d(i,j) = e_max - (weights(i,j) + weights(j,i)) / 2, zero diagonal.
DissimilarityMatrix dissimilarity(const SemanticNetwork& net);

// JSON round trip ({words, e_max, weights} with row-major weights).
std::string network_to_json(const SemanticNetwork& net, const EmotionLexicon& lexicon);
SemanticNetwork network_from_json(const std::string& text, const EmotionLexicon& lexicon);

// Graphviz / GraphML exports. Optional partition adds a community attribute
// to nodes it covers (keyed by word id).
void write_dot(std::ostream& out, const SemanticNetwork& net, const EmotionLexicon& lexicon,
               const Partition* communities = nullptr, double min_weight = 0.0);
void write_graphml(std::ostream& out, const SemanticNetwork& net, const EmotionLexicon& lexicon,
                   const Partition* communities = nullptr);

}  // namespace emonet
