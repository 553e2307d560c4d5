#include "song/trainer.hpp"

#include <iostream>
#include <stdexcept>

#include "song/edge_curation.hpp"
#include "song/embedding_layout.hpp"
#include "song/growth.hpp"
#include "song/neighbor_search.hpp"
#include "song/self_organization.hpp"

namespace song {

namespace {

// Adaptive growth threshold: a node splits once it collects the error mass
// of this many average samples within a single epoch.
constexpr double kAdaptiveThetaSamples = 50.0;

void check_state_finite(const SongModel& model) {
    if (!model.coding_vectors().allFinite() || !model.embedding().allFinite() ||
        !model.growth_error().allFinite())
        throw std::runtime_error("trainer: NaN or Inf detected in model state");
}

TrainReport run_session(SongModel& model, const RowMatrixXd& train, const ProgressFn& progress) {
    TrainReport report;
    const Index n_rows = train.rows();
    const HyperParams& hp = model.hyper;

    const bool adaptive_theta = hp.theta_g <= 0.0;
    if (!adaptive_theta) model.theta_g = hp.theta_g;
    bool capacity_warned = false;

    // The schedule continues across sessions: each session extends the decay
    // horizon by t_max, so a model that has already trained for E epochs
    // starts at alpha_0 * t_max / (E + t_max) and decays toward zero. Later
    // increments therefore reorganize progressively less.
    const Index start_epoch = model.epoch;
    const Index horizon = start_epoch + hp.t_max;
    const double alpha_start =
        hp.alpha_0 * (1.0 - static_cast<double>(start_epoch) / static_cast<double>(horizon));

    for (Index t = start_epoch; t < horizon; ++t) {
        const double alpha =
            hp.alpha_0 * (1.0 - static_cast<double>(t) / static_cast<double>(horizon));
        const std::vector<Index> order = model.rng.permutation(n_rows);
        int changes = 0;
        int growths = 0;
        double dist_sum = 0.0;

        for (const Index row : order) {
            const Eigen::VectorXd x = train.row(row).transpose();
            const NeighborSet neighbors = nearest_coding_vectors(model, x, hp.k);
            const Index i1 = neighbors.winner();

            const EdgeUpdateOutcome outcome = curate_edges(model, neighbors);
            if (outcome.neighbor_set_changed) ++changes;

            organize_coding_vectors(model, x, neighbors, alpha);
            layout_step(model, i1, alpha);

            // Quantization distance at assignment time (before the winner moved).
            const double dist = neighbors.distances.front();
            const double g = accumulate_growth(model, i1, dist);
            dist_sum += dist;
            if (model.theta_g > 0.0 && g > model.theta_g) {
                if (grow(model, x, neighbors)) {
                    ++report.growth_events;
                    ++growths;
                } else if (!capacity_warned) {
                    std::cerr << "trainer: node capacity " << hp.max_nodes
                              << " reached; growth skipped\n";
                    capacity_warned = true;
                }
            }
        }

        // Recalibrated from each epoch's mean winner distance so the growth
        // threshold tracks the current quantization scale.
        if (adaptive_theta)
            model.theta_g = kAdaptiveThetaSamples * dist_sum / static_cast<double>(n_rows);

        report.edge_changes_per_epoch.push_back(changes);
        ++report.epochs_run;
        report.final_alpha = alpha;
        ++model.epoch;
        // Accumulators measure per-epoch error; without a boundary reset any
        // node crosses any fixed threshold eventually and growth would only
        // stop at capacity.
        model.growth_error().setZero();
        check_state_finite(model);
        if (progress) progress(report);
        // Stable graph: a full pass with no neighbor-set change and no edge
        // added by growth. Stability is only trusted once the schedule has
        // cooled; at high alpha the embedding still oscillates even when the
        // graph is quiet.
        if (changes == 0 && growths == 0 && alpha <= 0.25 * alpha_start) {
            report.terminated_early = true;
            break;
        }
    }

    DataMatrix trained;
    trained.rows = train;
    report.final_qe = quantization_error(model, trained);
    return report;
}

RowMatrixXd vstack(const RowMatrixXd& top, const RowMatrixXd& bottom) {
    RowMatrixXd out(top.rows() + bottom.rows(), top.cols());
    out.topRows(top.rows()) = top;
    out.bottomRows(bottom.rows()) = bottom;
    return out;
}

}  // namespace

TrainReport fit(SongModel& model, const DataMatrix& data, const ProgressFn& progress) {
    validate_data(data, model.input_dim());
    TrainReport report = run_session(model, data.rows, progress);
    model.reference_data = data.rows;
    return report;
}

TrainReport partial_fit(SongModel& model, const DataMatrix& new_data, const ProgressFn& progress) {
    if (new_data.size() == 0) return TrainReport{};
    validate_data(new_data, model.input_dim());

    const RowMatrixXd train = model.hyper.replay_old
                                  ? vstack(model.reference_data, new_data.rows)
                                  : new_data.rows;
    TrainReport report = run_session(model, train, progress);
    model.reference_data = vstack(model.reference_data, new_data.rows);
    return report;
}

}  // namespace song
