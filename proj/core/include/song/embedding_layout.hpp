/**
 * @file embedding_layout.hpp
 * @brief Cross-entropy driven layout of the embedding rows.
 *
 * Output-space similarity uses the rational quadratic kernel
 *   q(y1, y2) = 1 / (1 + a * |y1 - y2|^(2b)).
 * Positive symmetric edges attract the neighbor row toward the winner's row;
 * sampled non-edges repulse it. Only the neighbor row moves in both cases.
 * Distances in the gradient factors are clamped below by dist_floor since
 * both factors diverge as the pair coincides.
 */
#pragma once

#include "song/model.hpp"
#include "song/types.hpp"

namespace song {

struct KernelParams {
    double a = 1.577;
    double b = 0.895;
};

struct LayoutCounts {
    int attractions = 0;
    int repulsions = 0;
};

/// Rational quadratic similarity in (0, 1]; 1 at zero distance.
double kernel_q(const Eigen::Ref<const Eigen::VectorXd>& y1,
                const Eigen::Ref<const Eigen::VectorXd>& y2, const KernelParams& kp);

/// Pulls y_j toward y_i1 along the attraction gradient scaled by the edge
/// strength e_hat in (0, 1]. Returns the displacement applied to y_j.
Eigen::VectorXd attract(SongModel& model, Index i1, Index j, double e_hat, double alpha);

/// Pushes y_j away from y_i1 along the repulsion gradient for a sampled
/// non-edge. A coincident pair moves along a seeded uniform random unit
/// direction with the magnitude the formula takes at the clamp distance.
/// Returns the displacement applied to y_j.
Eigen::VectorXd repulse(SongModel& model, Index i1, Index j, double alpha);

/// Full layout pass for one winner: attraction along every positive
/// symmetric edge, then neg_rate * (edge count) repulsions drawn uniformly
/// without replacement from the winner's non-edges.
LayoutCounts layout_step(SongModel& model, Index i1, double alpha);

}  // namespace song
