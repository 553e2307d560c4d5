/**
 * @file growth.hpp
 * @brief Growth-error accounting and insertion of new nodes.
 *
 * Quantization distance accumulates at each sample's winner; once the
 * trainer sees the accumulator exceed the growth threshold it inserts a new
 * coding vector at the centroid of the sample's k nearest coding vectors,
 * with a matching embedding row at the centroid of their images, wired into
 * the winner's neighborhood so it cannot drift away unconnected.
 */
#pragma once

#include <optional>

#include "song/model.hpp"
#include "song/types.hpp"

namespace song {

/// Adds the winner's quantization distance to its growth accumulator and
/// returns the updated value.
double accumulate_growth(SongModel& model, Index i1, double dist);

/// Inserts a new node for the sample x with the given current neighbor set.
/// Edges are created from each of the k nearest nodes to the new node and
/// from the new node to every current neighbor of the winner; the winner's
/// growth error resets to zero. Returns the new index, or nullopt when the
/// model is at capacity (growth is skipped).
std::optional<Index> grow(SongModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                          const NeighborSet& neighbors);

}  // namespace song
