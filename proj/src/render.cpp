#include "emonet/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "emonet/error.hpp"

namespace emonet {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string petal_color(int petal) {
    switch (petal) {
        case 0: return "#f5c211";  // joy
        case 1: return "#8bc34a";  // trust
        case 2: return "#2e7d32";  // fear
        case 3: return "#00bcd4";  // surprise
        case 4: return "#1c71d8";  // sadness
        case 5: return "#9141ac";  // disgust
        case 6: return "#e01b24";  // anger
        case 7: return "#ff9800";  // anticipation
        default: return "#9a9996";  // off-wheel
    }
}

void write_svg(std::ostream& out, const std::vector<SvgNode>& nodes,
               const std::vector<SvgEdge>& edges, double canvas) {
    if (nodes.empty()) throw Error(Stage::layout, "write_svg: nothing to draw");
    double min_x = nodes[0].x, max_x = nodes[0].x;
    double min_y = nodes[0].y, max_y = nodes[0].y;
    for (const auto& n : nodes) {
        min_x = std::min(min_x, n.x);
        max_x = std::max(max_x, n.x);
        min_y = std::min(min_y, n.y);
        max_y = std::max(max_y, n.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double margin = 60.0;
    const double scale = (canvas - 2.0 * margin) / span;
    const auto px = [&](double x) { return margin + (x - min_x) * scale; };
    const auto py = [&](double y) { return margin + (y - min_y) * scale; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas << "\" height=\""
        << canvas << "\" viewBox=\"0 0 " << canvas << " " << canvas << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (const auto& e : edges) {
        const auto& a = nodes[e.from];
        const auto& b = nodes[e.to];
        out << "  <line x1=\"" << fmt(px(a.x)) << "\" y1=\"" << fmt(py(a.y)) << "\" x2=\""
            << fmt(px(b.x)) << "\" y2=\"" << fmt(py(b.y)) << "\" stroke=\"#c0bfbc\""
            << " stroke-width=\"" << fmt(e.width) << "\"/>\n";
    }
    for (const auto& n : nodes) {
        out << "  <circle cx=\"" << fmt(px(n.x)) << "\" cy=\"" << fmt(py(n.y)) << "\" r=\""
            << fmt(n.radius) << "\" fill=\"" << n.color << "\"/>\n";
        out << "  <text x=\"" << fmt(px(n.x) + n.radius + 3.0) << "\" y=\""
            << fmt(py(n.y) + 4.0) << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << escape_xml(n.label) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_network_svg(std::ostream& out, const Layout& layout, const SemanticNetwork& net,
                       const EmotionLexicon& lexicon) {
    if (layout.coords.rows() != net.n || layout.coords.cols() < 2) {
        throw Error(Stage::layout, "write_network_svg: layout does not match network");
    }
    std::vector<SvgNode> nodes;
    nodes.reserve(net.n);
    for (std::size_t i = 0; i < net.n; ++i) {
        const int word_id = net.words[i];
        SvgNode node;
        node.x = layout.coords(i, 0);
        node.y = layout.coords(i, 1);
        node.label = lexicon.word(word_id).english;
        node.color = petal_color(lexicon.wheel().petal_of(word_id));
        node.radius = lexicon.word(word_id).category == WordCategory::secondary ? 4.0 : 5.5;
        nodes.push_back(std::move(node));
    }
    write_svg(out, nodes, {});
}

void write_community_svg(std::ostream& out, const Layout& layout, const CommunityNetwork& cn,
                         const Decomposition& dec, const SemanticNetwork& net,
                         const EmotionLexicon& lexicon) {
    const std::size_t m = cn.communities.size();
    if (layout.coords.rows() != m || layout.coords.cols() < 2) {
        throw Error(Stage::layout, "write_community_svg: layout does not match communities");
    }
    std::vector<SvgNode> nodes;
    nodes.reserve(m);
    for (std::size_t a = 0; a < m; ++a) {
        SvgNode node;
        node.x = layout.coords(a, 0);
        node.y = layout.coords(a, 1);
        std::string label;
        int petal = -1;
        for (const int idx : cn.top_words[a]) {
            if (idx < 0) continue;
            const int word_id = net.words[static_cast<std::size_t>(idx)];
            if (!label.empty()) label += " / ";
            label += lexicon.word(word_id).english;
            if (petal < 0) petal = lexicon.wheel().petal_of(word_id);
        }
        node.label = label;
        node.color = petal_color(petal);
        node.radius = 6.0 + 24.0 * dec.pi[cn.communities[a]];
        nodes.push_back(std::move(node));
    }
    std::vector<SvgEdge> edges;
    double max_s = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            max_s = std::max(max_s, 0.5 * (cn.omega(a, b) + cn.omega(b, a)));
        }
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            const double s = 0.5 * (cn.omega(a, b) + cn.omega(b, a));
            if (max_s > 0.0 && s > 0.0) {
                edges.push_back({a, b, 0.5 + 4.0 * s / max_s});
            }
        }
    }
    write_svg(out, nodes, edges);
}

std::string layout_to_json(const Layout& layout, const std::vector<std::string>& labels) {
    if (labels.size() != layout.coords.rows()) {
        throw Error(Stage::layout, "layout_to_json: label count does not match layout");
    }
    nlohmann::json doc;
    auto& points = doc["points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < layout.coords.rows(); ++i) {
        nlohmann::json p;
        p["label"] = labels[i];
        nlohmann::json coords = nlohmann::json::array();
        for (std::size_t c = 0; c < layout.coords.cols(); ++c) {
            coords.push_back(layout.coords(i, c));
        }
        p["coords"] = std::move(coords);
        points.push_back(std::move(p));
    }
    doc["eigenvalues"] = layout.eigenvalues;
    doc["stress_note"] = layout.stress_note;
    return doc.dump(2) + "\n";
}

}  // namespace emonet
