/**
 * @file neighbor_search.hpp
 * @brief Exact k-nearest coding-vector queries.
 *
 * A brute-force scan over the coding-vector matrix. The set stays small
 * (hundreds to a few thousand rows) and moves every iteration, so a spatial
 * index would spend more time on maintenance than it saves.
 */
#pragma once

#include "song/model.hpp"
#include "song/types.hpp"

namespace song {

/// Returns the min(k, node_count) nearest coding vectors to x, sorted by
/// Euclidean distance ascending, ties broken toward the lower index.
NeighborSet nearest_coding_vectors(const SongModel& model,
                                   const Eigen::Ref<const Eigen::VectorXd>& x, Index k);

}  // namespace song
