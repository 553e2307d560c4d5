/**
 * @file edge_curation.hpp
 * @brief Renewal, decay, and pruning of directed edges around the winner.
 *
 * Per sampled input the winner's outgoing edges are curated: edges to the
 * current k nearest neighbors are reset to full strength, every other
 * existing outgoing edge decays by a constant multiplier, and edges that
 * fall below the pruning threshold drop to exact zero so the graph stays
 * sparse. The symmetric strengths read by the other steps are derived
 * lazily from the directed matrix instead of materializing the symmetric
 * matrix each iteration.
 */
#pragma once

#include <vector>

#include "song/model.hpp"
#include "song/types.hpp"

namespace song {

struct EdgeUpdateOutcome {
    int renewed = 0;
    int decayed = 0;
    int pruned = 0;
    bool neighbor_set_changed = false;
};

/// Applies renewal/decay/pruning to the winner's outgoing edges for the
/// given neighbor set and reports whether the winner's nonzero symmetric
/// neighbor set changed.
EdgeUpdateOutcome curate_edges(SongModel& model, const NeighborSet& neighbors);

/// (E + E^T) / 2; the input is not modified.
Eigen::MatrixXd symmetrize(const Eigen::Ref<const Eigen::MatrixXd>& edges);

/// Indices j != node with strictly positive strength in a symmetric edge
/// matrix, ascending.
std::vector<Index> neighbor_list(const Eigen::Ref<const Eigen::MatrixXd>& edges_sym, Index node);

/// Symmetric strength (E(i,j) + E(j,i)) / 2 without materializing E_s.
double symmetric_strength(const SongModel& model, Index i, Index j);

/// Indices j != node with positive symmetric strength, ascending; equivalent
/// to neighbor_list(symmetrize(E), node).
std::vector<Index> symmetric_neighbors(const SongModel& model, Index node);

}  // namespace song
