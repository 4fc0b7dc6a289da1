#include "emonet/mdmc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "emonet/error.hpp"
#include "emonet/rng.hpp"

namespace emonet {

namespace {

// Base strength of the component-starvation prior. Each iteration a
// component must hold at least (kStarveBase + max(alpha - 1, 0)) / K_alive of
// the responsibility mass or shrink; whatever drops to zero is removed for
// good. The base term retires duplicate components that split one community
// between them, the alpha term is what merges everything at coarse
// resolutions.
constexpr double kStarveBase = 0.05;

// Responsibility mass below which a component is considered dead regardless
// of the starvation prior (guards against numerically orphaned components).
constexpr double kMassFloor = 1e-12;

std::vector<double> ensure_stationary(const MarkovModel& model) {
    if (!model.p.empty()) {
        if (model.p.size() != model.t.rows()) {
            throw Error(Stage::decompose, "decompose: stationary length mismatch");
        }
        return model.p;
    }
    return stationary(model);
}

double mixture_residual(const std::vector<double>& p, const std::vector<double>& pi,
                        const Matrix& rows) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double mix = 0.0;
        for (std::size_t k = 0; k < pi.size(); ++k) mix += pi[k] * rows(k, i);
        worst = std::max(worst, std::fabs(mix - p[i]));
    }
    return worst;
}

}  // namespace

void DecomposeConfig::validate() const {
    if (k_max < 1) throw Error(Stage::config, "decompose: k_max must be at least 1");
    if (!(alpha > 0.0)) throw Error(Stage::config, "decompose: alpha must be positive");
    if (!(tol > 0.0)) throw Error(Stage::config, "decompose: tol must be positive");
    if (max_iter < 1) throw Error(Stage::config, "decompose: max_iter must be at least 1");
    if (!(prune_eps >= 0.0 && prune_eps < 1.0)) {
        throw Error(Stage::config, "decompose: prune_eps must lie in [0, 1)");
    }
}

Decomposition decompose(const MarkovModel& model, const DecomposeConfig& cfg) {
    return decompose(model, cfg, nullptr, IterationObserver{});
}

Decomposition decompose(const MarkovModel& model, const DecomposeConfig& cfg,
                        const Matrix& init_rows) {
    return decompose(model, cfg, &init_rows, IterationObserver{});
}

Decomposition decompose(const MarkovModel& model, const DecomposeConfig& cfg,
                        const Matrix* init_rows, const IterationObserver& observer) {
    cfg.validate();
    const std::size_t n = model.t.rows();
    if (n == 0 || model.t.cols() != n) {
        throw Error(Stage::decompose, "decompose: model has no transition matrix");
    }
    const std::size_t K = cfg.k_max;
    const double N = static_cast<double>(n);

    Decomposition dec;
    dec.config = cfg;
    dec.stationary = ensure_stationary(model);

    if (K == 1) {
        // A one-component mixture has the exact closed-form solution.
        dec.pi = {1.0};
        dec.p_given_k = Matrix(1, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) dec.p_given_k(0, i) = dec.stationary[i];
        dec.converged = true;
        dec.iterations = 0;
        dec.residual = 0.0;
        return dec;
    }

    // Start: uniform mixture weights over seeded Dirichlet profiles.
    Matrix rows(K, n, 0.0);
    if (init_rows != nullptr) {
        if (init_rows->rows() != K || init_rows->cols() != n) {
            throw Error(Stage::decompose, "decompose: init profile shape mismatch");
        }
        rows = *init_rows;
    } else {
        Rng rng(cfg.seed);
        for (std::size_t k = 0; k < K; ++k) {
            const auto draw = rng.dirichlet(n, 1.0);
            for (std::size_t i = 0; i < n; ++i) rows(k, i) = draw[i];
        }
    }
    std::vector<double> pi(K, 1.0 / static_cast<double>(K));
    std::vector<bool> alive(K, true);
    std::size_t n_alive = K;

    const double prior = (cfg.alpha - 1.0) / N;
    const double starve = kStarveBase + std::max(cfg.alpha - 1.0, 0.0);

    Matrix q(K, n, 0.0);        // evolved profiles
    Matrix mass(K, n, 0.0);     // responsibility-weighted stationary mass
    std::vector<double> w(K, 0.0);
    std::vector<double> qi(n, 0.0);

    bool converged = false;
    std::size_t iterations = 0;
    for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
        iterations = iter + 1;

        // Evolve every live profile one step along the walk.
        for (std::size_t k = 0; k < K; ++k) {
            if (!alive[k]) continue;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += model.t(i, j) * rows(k, j);
                q(k, i) = acc;
            }
        }

        // E-step: responsibilities of the evolved mixture for the stationary
        // mass at each node.
        for (std::size_t i = 0; i < n; ++i) {
            double total = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                if (alive[k]) total += pi[k] * q(k, i);
            }
            qi[i] = total;
        }
        for (std::size_t k = 0; k < K; ++k) {
            if (!alive[k]) continue;
            double wk = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double gamma = qi[i] > 0.0 ? pi[k] * q(k, i) / qi[i] : 0.0;
                const double m = dec.stationary[i] * gamma;
                mass(k, i) = m;
                wk += m;
            }
            w[k] = wk;
        }

        // M-step, mixture weights: starve components that hold less than the
        // prior demands; collapsed components are removed permanently.
        const double cut = starve / static_cast<double>(n_alive);
        double vsum = 0.0;
        std::size_t best = K;
        double best_w = 0.0;
        std::vector<double> v(K, 0.0);
        for (std::size_t k = 0; k < K; ++k) {
            if (!alive[k]) continue;
            if (w[k] > best_w) {
                best_w = w[k];
                best = k;
            }
            v[k] = w[k] < kMassFloor ? 0.0 : std::max(w[k] - cut, 0.0);
            vsum += v[k];
        }
        if (vsum <= 0.0) {
            // Everything fell below the prior at once; the strongest
            // component carries on alone rather than erroring out.
            if (best == K || !(best_w > 0.0) || !std::isfinite(best_w)) {
                throw Error(Stage::decompose,
                            "decompose: resolution too aggressive, all communities collapsed");
            }
            v[best] = best_w;
            vsum = best_w;
        }

        double max_change = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            if (!alive[k]) continue;
            const double next = v[k] / vsum;
            max_change = std::max(max_change, std::fabs(next - pi[k]));
            pi[k] = next;
            if (next == 0.0) {
                alive[k] = false;
                --n_alive;
                for (std::size_t i = 0; i < n; ++i) rows(k, i) = 0.0;
            }
        }

        // M-step, profiles: normalized responsibility mass with the
        // resolution prior added in profile units and clipped at zero.
        for (std::size_t k = 0; k < K; ++k) {
            if (!alive[k]) continue;
            double rsum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double r = std::max(mass(k, i) / w[k] + prior, 0.0);
                mass(k, i) = r;
                rsum += r;
            }
            if (rsum <= 0.0) {
                // Cannot happen for alpha > 0 (the largest profile entry is
                // at least 1/n and the prior trims strictly less), but guard
                // against pathological input.
                throw Error(Stage::decompose, "decompose: community profile collapsed");
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double next = mass(k, i) / rsum;
                max_change = std::max(max_change, std::fabs(next - rows(k, i)));
                rows(k, i) = next;
            }
        }

        if (observer) observer(IterationState{iterations, pi, rows});

        if (max_change < cfg.tol) {
            converged = true;
            break;
        }
    }

    dec.pi = std::move(pi);
    dec.p_given_k = std::move(rows);
    dec.converged = converged;
    dec.iterations = iterations;
    dec.residual = mixture_residual(dec.stationary, dec.pi, dec.p_given_k);
    return dec;
}

Decomposition decompose_best(const MarkovModel& model, const DecomposeConfig& cfg,
                             std::span<const std::uint64_t> seeds) {
    if (seeds.empty()) throw Error(Stage::decompose, "decompose_best: no seeds given");
    Decomposition best;
    bool have = false;
    for (const std::uint64_t seed : seeds) {
        DecomposeConfig run = cfg;
        run.seed = seed;
        Decomposition dec = decompose(model, run);
        if (!have || dec.residual < best.residual) {
            best = std::move(dec);
            have = true;
        }
    }
    return best;
}

Matrix posterior(const Decomposition& dec) {
    const std::size_t K = dec.pi.size();
    const std::size_t n = dec.stationary.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(dec.stationary[i] > 0.0)) {
            throw Error(Stage::decompose, "posterior: stationary probability of node " +
                                              std::to_string(i) + " is zero");
        }
    }
    Matrix post(K, n, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            post(k, i) = dec.p_given_k(k, i) * dec.pi[k] / dec.stationary[i];
        }
    }
    return post;
}

Partition hard_assign(const Decomposition& dec) {
    const std::size_t K = dec.pi.size();
    const std::size_t n = dec.stationary.size();
    Partition partition;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double score = dec.pi[k] * dec.p_given_k(k, i);
            if (score > best_score) {
                best_score = score;
                best = k;
            }
        }
        partition.assign(static_cast<int>(i), static_cast<int>(best));
    }
    return partition;
}

Partition hard_assign_words(const Decomposition& dec, const SemanticNetwork& net) {
    const Partition by_node = hard_assign(dec);
    Partition by_word;
    for (std::size_t i = 0; i < net.n; ++i) {
        by_word.assign(net.words[i], by_node.label(static_cast<int>(i)));
    }
    return by_word;
}

std::size_t active_count(const Decomposition& dec, double eps) {
    std::size_t count = 0;
    for (const double p : dec.pi) {
        if (p > eps) ++count;
    }
    return count;
}

std::size_t active_count(const Decomposition& dec) {
    return active_count(dec, dec.config.prune_eps);
}

CommunityNetwork omega(const Decomposition& dec, const MarkovModel& model) {
    const std::size_t n = dec.stationary.size();
    if (model.t.rows() != n) {
        throw Error(Stage::decompose, "omega: model size does not match decomposition");
    }
    CommunityNetwork cn;
    for (std::size_t k = 0; k < dec.pi.size(); ++k) {
        if (dec.pi[k] > dec.config.prune_eps) cn.communities.push_back(k);
    }
    const std::size_t m = cn.communities.size();
    // Evolve each active profile once; omega(k',k) is then a dot product.
    Matrix evolved(m, n, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t k = cn.communities[a];
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += model.t(i, j) * dec.p_given_k(k, j);
            evolved(a, i) = acc;
        }
    }
    cn.omega = Matrix(m, m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {      // destination community k'
        const std::size_t kp = cn.communities[a];
        for (std::size_t b = 0; b < m; ++b) {  // source community k
            const std::size_t k = cn.communities[b];
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += dec.p_given_k(kp, i) * evolved(b, i);
            cn.omega(a, b) = dec.pi[kp] * dec.pi[k] * acc;
        }
    }
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t k = cn.communities[a];
        int first = -1, second = -1;
        double first_v = -1.0, second_v = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = dec.p_given_k(k, i);
            if (v > first_v) {
                second = first;
                second_v = first_v;
                first = static_cast<int>(i);
                first_v = v;
            } else if (v > second_v) {
                second = static_cast<int>(i);
                second_v = v;
            }
        }
        cn.top_words.push_back({first, second_v > 0.0 ? second : -1});
    }
    return cn;
}

std::vector<SweepRow> alpha_sweep(const MarkovModel& model, const DecomposeConfig& base,
                                  std::span<const double> alphas,
                                  std::span<const std::uint64_t> seeds) {
    if (alphas.empty()) throw Error(Stage::decompose, "alpha_sweep: no alphas given");
    std::vector<SweepRow> rows;
    rows.reserve(alphas.size());
    for (const double alpha : alphas) {
        DecomposeConfig cfg = base;
        cfg.alpha = alpha;
        const Decomposition dec = decompose_best(model, cfg, seeds);
        SweepRow row;
        row.alpha = alpha;
        row.seed = dec.config.seed;
        row.active = active_count(dec);
        row.converged = dec.converged;
        row.residual = dec.residual;
        row.partition = hard_assign(dec);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string decomposition_to_json(const Decomposition& dec) {
    nlohmann::json doc;
    doc["pi"] = dec.pi;
    auto& rows = doc["p_given_k"] = nlohmann::json::array();
    for (std::size_t k = 0; k < dec.p_given_k.rows(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t i = 0; i < dec.p_given_k.cols(); ++i) row.push_back(dec.p_given_k(k, i));
        rows.push_back(std::move(row));
    }
    doc["stationary"] = dec.stationary;
    doc["config"]["k_max"] = dec.config.k_max;
    doc["config"]["alpha"] = dec.config.alpha;
    doc["config"]["seed"] = dec.config.seed;
    doc["config"]["tol"] = dec.config.tol;
    doc["config"]["max_iter"] = dec.config.max_iter;
    doc["config"]["prune_eps"] = dec.config.prune_eps;
    doc["converged"] = dec.converged;
    doc["iterations"] = dec.iterations;
    doc["residual"] = dec.residual;
    return doc.dump(2) + "\n";
}

Decomposition decomposition_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Stage::parse, std::string("decomposition json: ") + e.what());
    }
    Decomposition dec;
    try {
        dec.pi = doc.at("pi").get<std::vector<double>>();
        dec.stationary = doc.at("stationary").get<std::vector<double>>();
        const auto& rows = doc.at("p_given_k");
        const std::size_t K = rows.size();
        const std::size_t n = dec.stationary.size();
        dec.p_given_k = Matrix(K, n, 0.0);
        for (std::size_t k = 0; k < K; ++k) {
            if (rows[k].size() != n) {
                throw Error(Stage::parse, "decomposition json: profile row length mismatch");
            }
            for (std::size_t i = 0; i < n; ++i) dec.p_given_k(k, i) = rows[k][i].get<double>();
        }
        const auto& cfg = doc.at("config");
        dec.config.k_max = cfg.at("k_max").get<std::size_t>();
        dec.config.alpha = cfg.at("alpha").get<double>();
        dec.config.seed = cfg.at("seed").get<std::uint64_t>();
        dec.config.tol = cfg.at("tol").get<double>();
        dec.config.max_iter = cfg.at("max_iter").get<std::size_t>();
        dec.config.prune_eps = cfg.at("prune_eps").get<double>();
        dec.converged = doc.at("converged").get<bool>();
        dec.iterations = doc.at("iterations").get<std::size_t>();
        dec.residual = doc.at("residual").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Stage::parse, std::string("decomposition json: ") + e.what());
    }
    return dec;
}

std::string community_network_to_json(const CommunityNetwork& cn, const Decomposition& dec,
                                      const SemanticNetwork& net,
                                      const EmotionLexicon& lexicon) {
    nlohmann::json doc;
    auto& comms = doc["communities"] = nlohmann::json::array();
    for (std::size_t a = 0; a < cn.communities.size(); ++a) {
        nlohmann::json c;
        c["component"] = cn.communities[a];
        c["pi"] = dec.pi[cn.communities[a]];
        nlohmann::json label = nlohmann::json::array();
        for (const int node : cn.top_words[a]) {
            if (node >= 0) label.push_back(lexicon.word(net.words[static_cast<std::size_t>(node)]).english);
        }
        c["label"] = std::move(label);
        comms.push_back(std::move(c));
    }
    // Interaction weights are tiny products of probabilities; scale by 1e4
    // for export, matching the tabulated convention.
    auto& om = doc["omega_x10000"] = nlohmann::json::array();
    for (std::size_t a = 0; a < cn.omega.rows(); ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t b = 0; b < cn.omega.cols(); ++b) row.push_back(cn.omega(a, b) * 1e4);
        om.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

void write_community_dot(std::ostream& out, const CommunityNetwork& cn,
                         const Decomposition& dec, const SemanticNetwork& net,
                         const EmotionLexicon& lexicon) {
    out << "digraph community_network {\n";
    out << "  node [shape=box];\n";
    for (std::size_t a = 0; a < cn.communities.size(); ++a) {
        out << "  c" << cn.communities[a] << " [label=\"";
        bool sep = false;
        for (const int node : cn.top_words[a]) {
            if (node < 0) continue;
            if (sep) out << " / ";
            out << lexicon.word(net.words[static_cast<std::size_t>(node)]).english;
            sep = true;
        }
        out << "\" pi=" << dec.pi[cn.communities[a]] << "];\n";
    }
    for (std::size_t a = 0; a < cn.omega.rows(); ++a) {
        for (std::size_t b = 0; b < cn.omega.cols(); ++b) {
            if (a == b) continue;
            out << "  c" << cn.communities[b] << " -> c" << cn.communities[a]
                << " [weight=" << cn.omega(a, b) * 1e4 << "];\n";
        }
    }
    out << "}\n";
}

}  // namespace emonet
