#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "emonet/error.hpp"
#include "emonet/graph.hpp"
#include "emonet/lexicon.hpp"
#include "emonet/rng.hpp"

using namespace emonet;

namespace {

SemanticNetwork small_net(std::size_t n) {
    SemanticNetwork net;
    net.n = n;
    net.words.resize(n);
    for (std::size_t i = 0; i < n; ++i) net.words[i] = static_cast<int>(i);
    net.weights = Matrix(n, n);
    return net;
}

SemanticNetwork random_net(Rng& rng, std::size_t n) {
    SemanticNetwork net = small_net(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) net.weights(i, j) = 7.0 * rng.uniform();
        }
    }
    return net;
}

// Stationary distribution by brute force: solve (t - I)p = 0 with sum(p) = 1
// through Gaussian elimination on the augmented system.
std::vector<double> stationary_solve(const Matrix& t) {
    const std::size_t n = t.rows();
    // rows 0..n-2: (t - I) p = 0; last row: sum p = 1
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = t(i, j) - (i == j ? 1.0 : 0.0);
    }
    for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
    a[n - 1][n] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[col][col] == 0.0) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = a[i][n] / a[i][i];
    return p;
}

}  // namespace

TEST_CASE("transition matrix hand cases") {
    SUBCASE("two-node swap chain at damping 0") {
        SemanticNetwork net = small_net(2);
        net.weights(0, 1) = 7.0;
        net.weights(1, 0) = 7.0;
        const MarkovModel m = transition_matrix(net, 0.0);
        CHECK(m.t(0, 0) == 0.0);
        CHECK(m.t(1, 0) == 1.0);
        CHECK(m.t(0, 1) == 1.0);
        CHECK(m.t(1, 1) == 0.0);
    }

    SUBCASE("out-strength normalization") {
        SemanticNetwork net = small_net(3);
        net.weights(0, 1) = 2.0;
        net.weights(0, 2) = 6.0;
        net.weights(1, 0) = 1.0;  // keep other columns non-dangling
        net.weights(2, 0) = 1.0;
        const MarkovModel m = transition_matrix(net, 0.0);
        // column 0: out-strength 8, so (0, 0.25, 0.75)
        CHECK(m.t(0, 0) == doctest::Approx(0.0));
        CHECK(m.t(1, 0) == doctest::Approx(0.25));
        CHECK(m.t(2, 0) == doctest::Approx(0.75));
    }

    SUBCASE("full teleport makes every entry 1/N") {
        Rng rng(4);
        SemanticNetwork net = random_net(rng, 5);
        const MarkovModel m = transition_matrix(net, 1.0);
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 5; ++j) {
                CHECK(m.t(i, j) == doctest::Approx(0.2).epsilon(1e-15));
            }
        }
    }

    SUBCASE("dangling column becomes uniform") {
        SemanticNetwork net = small_net(3);
        net.weights(1, 0) = 3.0;  // node 0 has no out-weight... node 1 does
        const MarkovModel m = transition_matrix(net, 0.0);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(m.t(i, 0) == doctest::Approx(1.0 / 3.0));
            CHECK(m.t(i, 2) == doctest::Approx(1.0 / 3.0));
        }
        CHECK(m.t(0, 1) == doctest::Approx(1.0));
    }

    SUBCASE("self-weights never count toward out-strength") {
        SemanticNetwork net = small_net(2);
        net.weights(0, 0) = 5.0;  // ignored
        net.weights(0, 1) = 4.0;
        net.weights(1, 0) = 4.0;
        const MarkovModel m = transition_matrix(net, 0.0);
        CHECK(m.t(1, 0) == doctest::Approx(1.0));
        CHECK(m.t(0, 0) == doctest::Approx(0.0));
    }
}

TEST_CASE("transition matrix validates input") {
    SemanticNetwork net = small_net(2);
    net.weights(0, 1) = 1.0;
    net.weights(1, 0) = 1.0;
    CHECK_THROWS_AS((void)transition_matrix(net, -0.1), Error);
    CHECK_THROWS_AS((void)transition_matrix(net, 1.5), Error);
    net.weights(0, 1) = -2.0;
    CHECK_THROWS_AS((void)transition_matrix(net, 0.15), Error);
}

TEST_CASE("transition columns sum to one on random networks") {
    Rng rng(17);
    for (int round = 0; round < 25; ++round) {
        const std::size_t n = 2 + rng.uniform_int(12);
        SemanticNetwork net = random_net(rng, n);
        const MarkovModel m = transition_matrix(net, 0.25 * rng.uniform());
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sum += m.t(i, j);
                CHECK(m.t(i, j) >= 0.0);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("stationary distribution") {
    SUBCASE("symmetric two-node chain is uniform") {
        SemanticNetwork net = small_net(2);
        net.weights(0, 1) = 7.0;
        net.weights(1, 0) = 7.0;
        MarkovModel m = transition_matrix(net, 0.15);
        const auto p = stationary(m);
        CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-10));
    }

    SUBCASE("matches a direct linear solve") {
        Rng rng(23);
        for (int round = 0; round < 10; ++round) {
            SemanticNetwork net = random_net(rng, 3 + rng.uniform_int(8));
            MarkovModel m = transition_matrix(net, 0.15);
            const auto p = stationary(m);
            const auto exact = stationary_solve(m.t);
            REQUIRE(p.size() == exact.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
                CHECK(p[i] == doctest::Approx(exact[i]).epsilon(1e-10));
            }
        }
    }

    SUBCASE("is invariant under the chain") {
        Rng rng(31);
        SemanticNetwork net = random_net(rng, 9);
        MarkovModel m = transition_matrix(net, 0.15);
        const auto p = stationary(m);
        const auto tp = mat_vec(m.t, p);
        double l1 = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            l1 += std::fabs(tp[i] - p[i]);
            sum += p[i];
            CHECK(p[i] >= 0.0);
        }
        CHECK(l1 < 1e-11);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("reports the residual when iteration stalls") {
        SemanticNetwork net = small_net(3);
        net.weights(0, 1) = 1.0;
        net.weights(0, 2) = 3.0;
        net.weights(1, 0) = 1.0;
        net.weights(1, 2) = 1.0;
        net.weights(2, 0) = 5.0;
        net.weights(2, 1) = 1.0;
        MarkovModel m = transition_matrix(net, 0.0);
        CHECK_THROWS_AS((void)stationary(m, 1e-12, 1), Error);
    }
}

TEST_CASE("dissimilarity flips the weight scale") {
    SemanticNetwork net = small_net(3);
    net.weights(0, 1) = 7.0;
    net.weights(1, 0) = 7.0;
    net.weights(0, 2) = 3.0;
    net.weights(2, 0) = 5.0;
    // pair (1,2) left at zero

    const DissimilarityMatrix dis = dissimilarity(net);
    CHECK(dis.d(0, 1) == doctest::Approx(0.0));    // maximal similarity
    CHECK(dis.d(0, 2) == doctest::Approx(3.0));    // 7 - (3+5)/2
    CHECK(dis.d(1, 2) == doctest::Approx(7.0));    // no similarity at all
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(dis.d(i, i) == 0.0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(dis.d(i, j) == dis.d(j, i));
            CHECK(dis.d(i, j) >= 0.0);
        }
    }
}

TEST_CASE("network JSON round trip") {
    const auto& lex = builtin_lexicon();
    Rng rng(7);
    SemanticNetwork net = random_net(rng, 48);
    const std::string text = network_to_json(net, lex);
    const SemanticNetwork back = network_from_json(text, lex);
    REQUIRE(back.n == net.n);
    CHECK(back.words == net.words);
    CHECK(back.e_max == net.e_max);
    CHECK(back.weights == net.weights);
}

TEST_CASE("DOT and GraphML exports carry nodes, labels and weights") {
    const auto& lex = builtin_lexicon();
    SemanticNetwork net = small_net(3);
    net.words = {*lex.find("joy"), *lex.find("sadness"), *lex.find("fear")};
    net.weights(0, 1) = 2.5;
    net.weights(1, 2) = 4.0;

    Partition part;
    part.assign(net.words[0], 0);
    part.assign(net.words[1], 1);
    part.assign(net.words[2], 1);

    std::ostringstream dot;
    write_dot(dot, net, lex, &part);
    const std::string d = dot.str();
    CHECK(d.find("digraph") != std::string::npos);
    CHECK(d.find("joy") != std::string::npos);
    CHECK(d.find("sadness") != std::string::npos);
    CHECK(d.find("2.5") != std::string::npos);
    CHECK(d.find("community") != std::string::npos);

    std::ostringstream gml;
    write_graphml(gml, net, lex, &part);
    const std::string g = gml.str();
    CHECK(g.find("<graphml") != std::string::npos);
    CHECK(g.find("edgedefault=\"directed\"") != std::string::npos);
    CHECK(g.find("joy") != std::string::npos);
    CHECK(g.find("4") != std::string::npos);
}
