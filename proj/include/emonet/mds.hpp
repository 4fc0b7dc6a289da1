#pragma once

#include <cstddef>
#include <vector>

#include "emonet/graph.hpp"
#include "emonet/matrix.hpp"
#include "emonet/mdmc.hpp"

namespace emonet {

// Classical (Torgerson) multidimensional scaling. Distances are recovered
// exactly when the dissimilarities are Euclidean; `stress_note` records the
// fraction of positive eigenvalue mass captured by the kept dimensions (1.0
// means the embedding is exact up to the dropped null space).
struct Layout {
    Matrix coords;  // n x dims
    std::vector<double> eigenvalues;  // the kept ones, descending
    double stress_note = 1.0;
};

struct EigenResult {
    std::vector<double> values;  // descending
    Matrix vectors;              // columns aligned with `values`
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
EigenResult jacobi_eigen(const Matrix& sym, double eps = 1e-12,
                         std::size_t max_sweeps = 64);

Layout classical_mds(const DissimilarityMatrix& dis, std::size_t dims = 2);

// Layout of the community network: interaction strength is turned into a
// dissimilarity d = 1 / (1 + s) with s the symmetrized omega scaled by 1e4,
// so strongly connected communities sit close together. Needs at least two
// communities.
Layout omega_layout(const CommunityNetwork& cn, std::size_t dims = 2);

}  // namespace emonet
