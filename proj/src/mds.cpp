#include "emonet/mds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "emonet/error.hpp"

namespace emonet {

EigenResult jacobi_eigen(const Matrix& sym, double eps, std::size_t max_sweeps) {
    const std::size_t n = sym.rows();
    if (n == 0 || sym.cols() != n) {
        throw Error(Stage::layout, "jacobi_eigen: matrix must be square");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::fabs(sym(i, j) - sym(j, i)) > 1e-9) {
                throw Error(Stage::layout, "jacobi_eigen: matrix is not symmetric");
            }
        }
    }
    Matrix a = sym;
    Matrix v(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (std::sqrt(2.0 * off) < eps) break;
        // One cyclic sweep over all off-diagonal positions.
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a(p, i);
                    const double aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    EigenResult result;
    result.values.resize(n);
    result.vectors = Matrix(n, n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        result.values[c] = a(order[c], order[c]);
        for (std::size_t i = 0; i < n; ++i) result.vectors(i, c) = v(i, order[c]);
    }
    // Deterministic sign: the entry of largest magnitude in each eigenvector
    // is made nonnegative (first such entry on ties).
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::fabs(result.vectors(i, c));
            if (mag > best + 1e-15) {
                best = mag;
                arg = i;
            }
        }
        if (result.vectors(arg, c) < 0.0) {
            for (std::size_t i = 0; i < n; ++i) result.vectors(i, c) = -result.vectors(i, c);
        }
    }
    return result;
}

Layout classical_mds(const DissimilarityMatrix& dis, std::size_t dims) {
    const std::size_t n = dis.d.rows();
    if (n == 0 || dis.d.cols() != n) {
        throw Error(Stage::layout, "classical_mds: dissimilarity matrix must be square");
    }
    if (dims == 0) throw Error(Stage::layout, "classical_mds: dims must be positive");
    if (dims > n) {
        throw Error(Stage::layout, "classical_mds: cannot embed " + std::to_string(n) +
                                       " points in " + std::to_string(dims) + " dimensions");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dis.d(i, i) != 0.0) {
            throw Error(Stage::layout, "classical_mds: nonzero diagonal dissimilarity");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (dis.d(i, j) < 0.0 || std::fabs(dis.d(i, j) - dis.d(j, i)) > 1e-9) {
                throw Error(Stage::layout, "classical_mds: dissimilarities must be symmetric"
                                           " and nonnegative");
            }
        }
    }

    // Double centering: b = -1/2 * J d^2 J with J = I - 11^T / n.
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    Matrix sq(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double s = dis.d(i, j) * dis.d(i, j);
            sq(i, j) = s;
            row_mean[i] += s;
        }
        row_mean[i] /= static_cast<double>(n);
        grand += row_mean[i];
    }
    grand /= static_cast<double>(n);
    Matrix b(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            b(i, j) = -0.5 * (sq(i, j) - row_mean[i] - row_mean[j] + grand);
        }
    }

    const EigenResult eig = jacobi_eigen(b);
    Layout layout;
    layout.coords = Matrix(n, dims, 0.0);
    layout.eigenvalues.assign(eig.values.begin(),
                              eig.values.begin() + static_cast<std::ptrdiff_t>(dims));
    double kept = 0.0, positive = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        const double lambda = eig.values[c];
        if (lambda > 0.0) {
            positive += lambda;
            if (c < dims) kept += lambda;
        }
    }
    layout.stress_note = positive > 0.0 ? kept / positive : 1.0;
    for (std::size_t c = 0; c < dims; ++c) {
        const double scale = eig.values[c] > 0.0 ? std::sqrt(eig.values[c]) : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            layout.coords(i, c) = eig.vectors(i, c) * scale;
        }
    }
    return layout;
}

Layout omega_layout(const CommunityNetwork& cn, std::size_t dims) {
    const std::size_t m = cn.communities.size();
    if (m < 2) {
        throw Error(Stage::layout, "omega_layout: need at least two communities");
    }
    DissimilarityMatrix dis;
    dis.d = Matrix(m, m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            const double s = 0.5 * (cn.omega(a, b) + cn.omega(b, a)) * 1e4;
            dis.d(a, b) = 1.0 / (1.0 + s);
        }
    }
    return classical_mds(dis, dims);
}

}  // namespace emonet
