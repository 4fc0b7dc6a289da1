#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "emonet/lexicon.hpp"
#include "emonet/mds.hpp"

namespace emonet {

// SVG rendering of 2-d layouts. Output is deterministic: fixed-precision
// coordinates and no environment-dependent content.

// Conventional wheel colors for petals 0..7; secondary words render grey.
std::string petal_color(int petal);

struct SvgNode {
    double x = 0.0;
    double y = 0.0;
    std::string label;
    std::string color;  // fill, e.g. "#1c71d8"
    double radius = 5.0;
};

struct SvgEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    double width = 1.0;
};

void write_svg(std::ostream& out, const std::vector<SvgNode>& nodes,
               const std::vector<SvgEdge>& edges, double canvas = 640.0);

// Word map: one node per network node, colored by petal.
void write_network_svg(std::ostream& out, const Layout& layout, const SemanticNetwork& net,
                       const EmotionLexicon& lexicon);

// Community map: one node per community, labeled with its top profile words
// and sized by mixture weight; edges carry symmetrized interaction strength.
void write_community_svg(std::ostream& out, const Layout& layout, const CommunityNetwork& cn,
                         const Decomposition& dec, const SemanticNetwork& net,
                         const EmotionLexicon& lexicon);

std::string layout_to_json(const Layout& layout, const std::vector<std::string>& labels);

}  // namespace emonet
