/**
 * @file trainer.hpp
 * @brief Epoch loop: per-sample edge curation, self-organization, layout,
 *        and conditional growth, with a linearly decaying learning rate.
 *
 * Each epoch visits a fresh random permutation of the training rows. The
 * learning rate at epoch t is alpha_0 * (1 - t / t_max). Training stops
 * early once an entire epoch passes with no neighbor-set change anywhere in
 * the graph. partial_fit continues from the current parameters with the
 * schedule restarted, by default replaying retained data alongside the new
 * rows so existing structure does not drift.
 */
#pragma once

#include <functional>
#include <vector>

#include "song/model.hpp"
#include "song/types.hpp"

namespace song {

struct TrainReport {
    int epochs_run = 0;
    bool terminated_early = false;
    std::vector<int> edge_changes_per_epoch;
    int growth_events = 0;
    double final_qe = 0.0;
    double final_alpha = 0.0;
};

/// Invoked once per completed epoch with the report so far.
using ProgressFn = std::function<void(const TrainReport&)>;

/// Trains the model on the data from its current state and retains the rows
/// for later replay. Throws on dimension mismatch, empty or non-finite data,
/// and on NaN appearing in the model state.
TrainReport fit(SongModel& model, const DataMatrix& data, const ProgressFn& progress = nullptr);

/// Continues training with new rows. An empty increment is a no-op. With
/// hyper.replay_old (default) the session trains on retained rows plus the
/// increment; afterwards the increment joins the retained rows either way.
TrainReport partial_fit(SongModel& model, const DataMatrix& new_data,
                        const ProgressFn& progress = nullptr);

}  // namespace song
