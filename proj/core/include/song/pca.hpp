/**
 * @file pca.hpp
 * @brief Principal-component projection used as a preprocessing step.
 *
 * The fitted projection is kept separate from the reduction itself so a
 * model trained on projected data can apply the identical projection to
 * later increments.
 */
#pragma once

#include <Eigen/Core>

#include "song/types.hpp"

namespace song {

struct PcaProjection {
    Eigen::VectorXd mean;     // per-dimension mean of the fitting data
    RowMatrixXd components;   // n_components x input_dim, rows are unit axes
    Eigen::VectorXd variance; // explained variance per component, nonincreasing

    Eigen::Index input_dim() const { return mean.size(); }
    Eigen::Index n_components() const { return components.rows(); }
};

/// Fit a projection onto the top principal components of mean-centered data.
/// If the data rank is below n_components, the available components are
/// returned and a warning is written to stderr.
PcaProjection pca_fit(const Eigen::Ref<const RowMatrixXd>& data, Eigen::Index n_components);

/// Project rows through a fitted projection.
RowMatrixXd pca_apply(const PcaProjection& proj, const Eigen::Ref<const RowMatrixXd>& data);

/// Fit-and-apply convenience; labels carry over unchanged.
DataMatrix pca_reduce(const DataMatrix& data, Eigen::Index n_components);

}  // namespace song
