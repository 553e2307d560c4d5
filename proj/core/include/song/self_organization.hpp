/**
 * @file self_organization.hpp
 * @brief Moves the winner and its graph neighbors toward a sampled input.
 *
 * Each selected coding vector c receives the update
 *   c += alpha * (x - c) * exp(-|x - c|^2 / sigma^2)
 * with sigma fixed at the distance from x to its k-th nearest coding vector,
 * so closer vectors move more and nothing overshoots past x for alpha <= 1.
 */
#pragma once

#include "song/model.hpp"
#include "song/types.hpp"

namespace song {

/// Applies the attraction update to the winner and every coding vector with
/// a positive symmetric edge to it. The neighbor set must be current for x.
/// sigma^2 is clamped below by dist_floor^2 when the neighborhood collapses
/// onto x. Returns the number of vectors updated.
int organize_coding_vectors(SongModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                            const NeighborSet& neighbors, double alpha);

}  // namespace song
