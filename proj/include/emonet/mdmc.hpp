#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "emonet/graph.hpp"
#include "emonet/lexicon.hpp"
#include "emonet/matrix.hpp"

namespace emonet {

// Decomposition of a random-walk model into overlapping communities: the
// stationary distribution is approximated by a mixture
//     p(i) ~= sum_k pi(k) p(i|k)
// fitted by expectation-maximization, where each community profile p(.|k) is
// pushed through the transition matrix once per iteration so that surviving
// components are coherent under the walk. The resolution parameter alpha
// shapes a Dirichlet-style prior: below 1 it trims sub-uniform tails off the
// profiles (many small communities), above 1 it smooths profiles and starves
// redundant components aggressively (few large communities). Components
// whose responsibility mass is no longer needed die off permanently, so the
// number of populated communities is found by the fit rather than fixed by
// k_max.

struct DecomposeConfig {
    std::size_t k_max = 10;
    double alpha = 0.001;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    std::size_t max_iter = 5000;
    double prune_eps = 1e-6;

    void validate() const;
};

struct Decomposition {
    std::vector<double> pi;     // mixture weights, one per component slot
    Matrix p_given_k;           // k_max x n; dead components have zero rows
    std::vector<double> stationary;
    DecomposeConfig config;
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;      // max_i |p(i) - sum_k pi(k) p(i|k)|
};

// Interaction weights between the surviving communities:
//   omega(k',k) = pi(k') pi(k) * sum_ij p(i|k') t(i,j) p(j|k).
// `communities` maps the matrix index back to the component slot, and
// `top_words` holds each community's two highest-profile node indices.
struct CommunityNetwork {
    std::vector<std::size_t> communities;
    Matrix omega;
    std::vector<std::array<int, 2>> top_words;
};

struct IterationState {
    std::size_t iteration;
    const std::vector<double>& pi;
    const Matrix& rows;
};

using IterationObserver = std::function<void(const IterationState&)>;

// Fit a decomposition. The stationary distribution is taken from the model
// or computed when absent. With k_max = 1 the exact single-component answer
// (pi = 1, profile = stationary distribution) is returned directly. The
// overload with `init_rows` replaces the seeded Dirichlet start with given
// profiles (k_max x n, rows normalized); the observer, when set, sees the
// parameters after every iteration.
Decomposition decompose(const MarkovModel& model, const DecomposeConfig& cfg);
Decomposition decompose(const MarkovModel& model, const DecomposeConfig& cfg,
                        const Matrix& init_rows);
Decomposition decompose(const MarkovModel& model, const DecomposeConfig& cfg,
                        const Matrix* init_rows, const IterationObserver& observer);

// Best fit across restart seeds (smallest mixture residual; earlier seed on
// ties). `seeds` overrides cfg.seed.
Decomposition decompose_best(const MarkovModel& model, const DecomposeConfig& cfg,
                             std::span<const std::uint64_t> seeds);

// Membership posterior p(k|i) = p(i|k) pi(k) / p(i) as a k_max x n matrix.
// Rows of dead components are zero; columns sum to 1 only up to the mixture
// residual.
Matrix posterior(const Decomposition& dec);

// Hard community assignment: node index -> argmax_k of the posterior (the
// smallest k on ties, including the all-zero edge case).
Partition hard_assign(const Decomposition& dec);

// Same labeling keyed by word id instead of node index.
Partition hard_assign_words(const Decomposition& dec, const SemanticNetwork& net);

// Number of components whose mixture weight exceeds eps.
std::size_t active_count(const Decomposition& dec, double eps);
std::size_t active_count(const Decomposition& dec);  // uses config.prune_eps

CommunityNetwork omega(const Decomposition& dec, const MarkovModel& model);

struct SweepRow {
    double alpha = 0.0;
    std::uint64_t seed = 0;  // seed of the best restart
    std::size_t active = 0;
    bool converged = false;
    double residual = 0.0;
    Partition partition;     // hard assignment over node indices
};

// decompose_best at each alpha, reporting how community structure coarsens
// as the resolution is relaxed.
std::vector<SweepRow> alpha_sweep(const MarkovModel& model, const DecomposeConfig& base,
                                  std::span<const double> alphas,
                                  std::span<const std::uint64_t> seeds);

// Serialization of a decomposition (pi, profiles, stationary, config,
// convergence state) and of the community network (omega scaled by 1e4 at
// export, labels from the top profile words).
std::string decomposition_to_json(const Decomposition& dec);
Decomposition decomposition_from_json(const std::string& text);
std::string community_network_to_json(const CommunityNetwork& cn, const Decomposition& dec,
                                      const SemanticNetwork& net,
                                      const EmotionLexicon& lexicon);
void write_community_dot(std::ostream& out, const CommunityNetwork& cn,
                         const Decomposition& dec, const SemanticNetwork& net,
                         const EmotionLexicon& lexicon);

}  // namespace emonet
