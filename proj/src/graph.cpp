#include "emonet/graph.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "emonet/error.hpp"

namespace emonet {

namespace {

void check_network(const SemanticNetwork& net) {
    if (net.n == 0) throw Error(Stage::network, "network: empty");
    if (net.words.size() != net.n || net.weights.rows() != net.n ||
        net.weights.cols() != net.n) {
        throw Error(Stage::network, "network: inconsistent dimensions");
    }
    if (net.e_max <= 0.0) throw Error(Stage::network, "network: e_max must be positive");
    for (std::size_t i = 0; i < net.n; ++i) {
        for (std::size_t j = 0; j < net.n; ++j) {
            const double w = net.weights(i, j);
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw Error(Stage::network, "network: weight (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") is negative or not finite");
            }
        }
    }
}

}  // namespace

MarkovModel transition_matrix(const SemanticNetwork& net, double damping) {
    check_network(net);
    if (!(damping >= 0.0 && damping <= 1.0)) {
        throw Error(Stage::network, "transition_matrix: damping must lie in [0, 1]");
    }
    const std::size_t n = net.n;
    const double teleport = damping / static_cast<double>(n);
    MarkovModel model;
    model.damping = damping;
    model.t = Matrix(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double out = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) out += net.weights(j, i);
        }
        if (out == 0.0) {
            // Dangling column: the walk teleports uniformly.
            for (std::size_t i = 0; i < n; ++i) model.t(i, j) = 1.0 / static_cast<double>(n);
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double follow = (i == j) ? 0.0 : (1.0 - damping) * net.weights(j, i) / out;
            model.t(i, j) = follow + teleport;
        }
    }
    return model;
}

std::vector<double> stationary(const MarkovModel& model, double tol, std::size_t max_iter) {
    const std::size_t n = model.t.rows();
    if (n == 0 || model.t.cols() != n) {
        throw Error(Stage::network, "stationary: model has no transition matrix");
    }
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    double residual = 0.0;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += model.t(i, j) * p[j];
            next[i] = acc;
        }
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += std::fabs(next[i] - p[i]);
        p.swap(next);
        if (residual < tol) return p;
    }
    std::ostringstream msg;
    msg << "stationary: no convergence after " << max_iter << " iterations (residual "
        << residual << ", tol " << tol << ")";
    throw Error(Stage::network, msg.str());
}

DissimilarityMatrix dissimilarity(const SemanticNetwork& net) {
    check_network(net);
    DissimilarityMatrix dis;
    dis.d = Matrix(net.n, net.n, 0.0);
    for (std::size_t i = 0; i < net.n; ++i) {
        for (std::size_t j = 0; j < net.n; ++j) {
            if (i == j) continue;
            dis.d(i, j) = net.e_max - 0.5 * (net.weights(i, j) + net.weights(j, i));
        }
    }
    return dis;
}

std::string network_to_json(const SemanticNetwork& net, const EmotionLexicon& lexicon) {
    check_network(net);
    nlohmann::json doc;
    auto& words = doc["words"] = nlohmann::json::array();
    for (int id : net.words) words.push_back(lexicon.word(id).english);
    doc["e_max"] = net.e_max;
    auto& rows = doc["weights"] = nlohmann::json::array();
    for (std::size_t i = 0; i < net.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < net.n; ++j) row.push_back(net.weights(i, j));
        rows.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

SemanticNetwork network_from_json(const std::string& text, const EmotionLexicon& lexicon) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Stage::parse, std::string("network json: ") + e.what());
    }
    if (!doc.contains("words") || !doc.contains("weights") || !doc.contains("e_max")) {
        throw Error(Stage::parse, "network json: need words, e_max and weights");
    }
    SemanticNetwork net;
    for (const auto& w : doc["words"]) {
        const auto id = lexicon.find(w.get<std::string>());
        if (!id) {
            throw Error(Stage::parse,
                        "network json: unknown word '" + w.get<std::string>() + "'");
        }
        net.words.push_back(*id);
    }
    net.n = net.words.size();
    net.e_max = doc["e_max"].get<double>();
    const auto& rows = doc["weights"];
    if (rows.size() != net.n) throw Error(Stage::parse, "network json: weight row count");
    net.weights = Matrix(net.n, net.n, 0.0);
    for (std::size_t i = 0; i < net.n; ++i) {
        if (rows[i].size() != net.n) {
            throw Error(Stage::parse, "network json: weight row " + std::to_string(i) +
                                          " has wrong length");
        }
        for (std::size_t j = 0; j < net.n; ++j) {
            net.weights(i, j) = rows[i][j].get<double>();
        }
    }
    check_network(net);
    return net;
}

void write_dot(std::ostream& out, const SemanticNetwork& net, const EmotionLexicon& lexicon,
               const Partition* communities, double min_weight) {
    check_network(net);
    out << "digraph semantic_network {\n";
    out << "  node [shape=ellipse];\n";
    for (std::size_t i = 0; i < net.n; ++i) {
        const int id = net.words[i];
        out << "  n" << i << " [label=\"" << lexicon.word(id).english << "\"";
        if (communities != nullptr && communities->contains(id)) {
            out << " community=" << communities->label(id);
        }
        out << "];\n";
    }
    for (std::size_t i = 0; i < net.n; ++i) {
        for (std::size_t j = 0; j < net.n; ++j) {
            if (i == j) continue;
            const double w = net.weights(i, j);
            if (w <= min_weight) continue;
            out << "  n" << i << " -> n" << j << " [weight=" << w << " label=\"" << w
                << "\"];\n";
        }
    }
    out << "}\n";
}

void write_graphml(std::ostream& out, const SemanticNetwork& net,
                   const EmotionLexicon& lexicon, const Partition* communities) {
    check_network(net);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
    out << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
    out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
    out << "  <graph id=\"semantic_network\" edgedefault=\"directed\">\n";
    for (std::size_t i = 0; i < net.n; ++i) {
        const int id = net.words[i];
        out << "    <node id=\"n" << i << "\">\n";
        out << "      <data key=\"label\">" << lexicon.word(id).english << "</data>\n";
        if (communities != nullptr && communities->contains(id)) {
            out << "      <data key=\"community\">" << communities->label(id) << "</data>\n";
        }
        out << "    </node>\n";
    }
    for (std::size_t i = 0; i < net.n; ++i) {
        for (std::size_t j = 0; j < net.n; ++j) {
            if (i == j || net.weights(i, j) == 0.0) continue;
            out << "    <edge source=\"n" << i << "\" target=\"n" << j << "\">"
                << "<data key=\"weight\">" << net.weights(i, j) << "</data></edge>\n";
        }
    }
    out << "  </graph>\n";
    out << "</graphml>\n";
}

}  // namespace emonet
