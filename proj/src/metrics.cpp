#include "emonet/metrics.hpp"

#include <cmath>
#include <map>

#include "emonet/error.hpp"

namespace emonet {

namespace {

double pair_value(const SemanticNetwork& net, int word_a, int word_b) {
    const auto a = net.node_of(word_a);
    const auto b = net.node_of(word_b);
    if (!a || !b) {
        throw Error(Stage::metrics, "cohesion: network is missing a wheel word (id " +
                                        std::to_string(!a ? word_a : word_b) + ")");
    }
    return (net.weights(*a, *b) + net.weights(*b, *a)) / (2.0 * net.e_max);
}

}  // namespace

LocalityReport locality_report(const SemanticNetwork& net, const Wheel& wheel) {
    LocalityReport report;
    report.e_max = net.e_max;
    for (int k = 0; k < 8; ++k) {
        const PairSets sets = petal_pair_sets(wheel, k);
        double local = 0.0;
        for (const auto& [a, b] : sets.within) local += pair_value(net, a, b);
        local /= static_cast<double>(sets.within.size());
        double global = 0.0;
        for (const auto& [a, b] : sets.cross) global += pair_value(net, a, b);
        global /= static_cast<double>(sets.cross.size());
        report.per_petal_locality[static_cast<std::size_t>(k)] = local;
        report.per_petal_globality[static_cast<std::size_t>(k)] = global;
        report.locality += local / 8.0;
        report.globality += global / 8.0;
    }
    return report;
}

double locality(const SemanticNetwork& net, const Wheel& wheel) {
    return locality_report(net, wheel).locality;
}

double globality(const SemanticNetwork& net, const Wheel& wheel) {
    return locality_report(net, wheel).globality;
}

std::vector<double> within_pair_values(const SemanticNetwork& net, const Wheel& wheel) {
    std::vector<double> values;
    for (int k = 0; k < 8; ++k) {
        for (const auto& [a, b] : petal_pair_sets(wheel, k).within) {
            values.push_back(pair_value(net, a, b));
        }
    }
    return values;
}

std::vector<double> cross_pair_values(const SemanticNetwork& net, const Wheel& wheel) {
    std::vector<double> values;
    for (int k = 0; k < 8; ++k) {
        for (const auto& [a, b] : petal_pair_sets(wheel, k).cross) {
            values.push_back(pair_value(net, a, b));
        }
    }
    return values;
}

double nmi(const Partition& a, const Partition& b, NmiNorm norm) {
    if (a.size() == 0 || b.size() == 0) {
        throw Error(Stage::metrics, "nmi: empty partition");
    }
    if (a.size() != b.size()) {
        throw Error(Stage::metrics, "nmi: domains differ in size (" + std::to_string(a.size()) +
                                        " vs " + std::to_string(b.size()) + ")");
    }
    const double n = static_cast<double>(a.size());
    std::map<int, double> count_a, count_b;
    std::map<std::pair<int, int>, double> joint;
    for (const auto& [id, label_a] : a.labels()) {
        if (!b.contains(id)) {
            throw Error(Stage::metrics, "nmi: domains disagree on word id " + std::to_string(id));
        }
        const int label_b = b.label(id);
        count_a[label_a] += 1.0;
        count_b[label_b] += 1.0;
        joint[{label_a, label_b}] += 1.0;
    }
    double h_a = 0.0, h_b = 0.0, mi = 0.0;
    for (const auto& [label, c] : count_a) {
        const double p = c / n;
        h_a -= p * std::log(p);
    }
    for (const auto& [label, c] : count_b) {
        const double p = c / n;
        h_b -= p * std::log(p);
    }
    for (const auto& [labels, c] : joint) {
        const double p = c / n;
        const double pa = count_a[labels.first] / n;
        const double pb = count_b[labels.second] / n;
        mi += p * std::log(p / (pa * pb));
    }
    const bool zero_a = h_a == 0.0;
    const bool zero_b = h_b == 0.0;
    if (zero_a && zero_b) return 1.0;
    if (zero_a || zero_b) return 0.0;
    if (norm == NmiNorm::max_entropy) return mi / std::max(h_a, h_b);
    return 2.0 * mi / (h_a + h_b);
}

}  // namespace emonet
