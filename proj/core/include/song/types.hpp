#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace song {

using Index = Eigen::Index;

/// Dense row-major matrix; one row per point throughout the library.
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Input collection: N points of dimension D with optional integer labels.
struct DataMatrix {
    RowMatrixXd rows;
    std::optional<std::vector<int>> labels;

    Index size() const { return rows.rows(); }
    Index dim() const { return rows.cols(); }
};

/// Ordered nearest-neighbor result: distinct indices with matching
/// nondecreasing Euclidean distances.
struct NeighborSet {
    std::vector<Index> indices;
    std::vector<double> distances;

    Index size() const { return static_cast<Index>(indices.size()); }
    Index winner() const { return indices.front(); }
};

/// Per-dimension bounds for random placement.
struct DataBounds {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

}  // namespace song
