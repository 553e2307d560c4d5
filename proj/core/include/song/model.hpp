/**
 * @file model.hpp
 * @brief Parametric state of the growing coding-vector graph.
 *
 * The model couples a set of coding vectors in input space with a directed
 * edge matrix and a bijective set of low-dimensional embedding rows. All
 * three grow together; row j of the coding vectors always corresponds to
 * row j of the embedding and entry j of the growth-error accumulator.
 */
#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "song/pca.hpp"
#include "song/rng.hpp"
#include "song/types.hpp"

namespace song {

/// Tunables of the training pipeline. Defaults follow the standard
/// configuration for 2-D output; theta_g of 0 selects the adaptive growth
/// threshold calibrated during the first trained epoch.
struct HyperParams {
    Index k = 2;                  // neighborhood size per sample
    Index t_max = 100;            // maximum epochs per training session
    double alpha_0 = 1.0;         // initial learning rate
    double a = 1.577;             // output kernel coefficient
    double b = 0.895;             // output kernel exponent
    double epsilon_decay = 0.9;   // per-touch edge decay multiplier
    double e_min = 0.01;          // pruning threshold for decayed edges
    double theta_g = 0.0;         // growth threshold; 0 = adaptive
    Index neg_rate = 1;           // negative samples per positive edge
    double dist_floor = 1e-3;     // lower clamp for embedding distances
    double disp_cap = 4.0;        // cap on a single layout displacement norm
    std::uint64_t seed = 42;
    Index max_nodes = 4096;       // growth capacity
    bool grow_with_input = false; // include the sample in the growth centroid
    bool replay_old = true;       // partial_fit trains on old and new data

    /// Throws std::invalid_argument on an out-of-range field.
    void validate() const;

    bool operator==(const HyperParams&) const = default;
};

class SongModel {
public:
    SongModel(Index input_dim, Index output_dim, HyperParams hyper);

    Index input_dim() const { return input_dim_; }
    Index output_dim() const { return output_dim_; }
    Index node_count() const { return n_; }

    /// Coding vectors, node_count x input_dim.
    auto coding_vectors() { return c_store_.topRows(n_); }
    auto coding_vectors() const { return c_store_.topRows(n_); }

    /// Directed edge strengths in [0,1], node_count x node_count, zero diagonal.
    auto edges() { return e_store_.topLeftCorner(n_, n_); }
    auto edges() const { return e_store_.topLeftCorner(n_, n_); }

    /// Embedding rows, node_count x output_dim.
    auto embedding() { return y_store_.topRows(n_); }
    auto embedding() const { return y_store_.topRows(n_); }

    /// Accumulated growth error per node.
    auto growth_error() { return g_store_.head(n_); }
    auto growth_error() const { return g_store_.head(n_); }

    /// Appends a coding vector / embedding row pair with zero edges and zero
    /// growth error; returns the new node index.
    Index append_node(const Eigen::Ref<const Eigen::VectorXd>& coding_vector,
                      const Eigen::Ref<const Eigen::VectorXd>& embedding_row);

    HyperParams hyper;
    Rng rng;
    std::int64_t epoch = 0;

    /// Resolved growth threshold; 0 until calibrated (see trainer).
    double theta_g = 0.0;

    /// Retained training rows replayed by partial_fit and used for
    /// displacement reporting. Empty until the first fit.
    RowMatrixXd reference_data;

    /// Input projection applied upstream of the model, when trained on
    /// PCA-reduced data. Persisted so increments get the same projection.
    std::optional<PcaProjection> pca;

    bool operator==(const SongModel& other) const;

private:
    Index input_dim_;
    Index output_dim_;
    Index n_ = 0;

    // Capacity-backed storage; everything past the logical prefix stays zero
    // so freshly appended nodes start with no edges.
    RowMatrixXd c_store_;
    Eigen::MatrixXd e_store_;
    RowMatrixXd y_store_;
    Eigen::VectorXd g_store_;

    void ensure_capacity(Index nodes);
};

/// Creates a model with output_dim + 1 coding vectors placed uniformly at
/// random inside the given per-dimension bounds ([0,1]^D when absent),
/// embedding rows uniform in [-1,1]^d, no edges, and zero growth error.
SongModel init_model(Index input_dim, Index output_dim, const HyperParams& hyper,
                     const std::optional<DataBounds>& data_bounds = std::nullopt);

/// Maps each point to the embedding row of its nearest coding vector.
RowMatrixXd transform(const SongModel& model, const DataMatrix& points);

/// Mean over points of half the squared distance to the nearest coding vector.
double quantization_error(const SongModel& model, const DataMatrix& points);

/// Throws std::invalid_argument if the data is empty, non-finite, or does not
/// match the expected dimension (when expected_dim >= 0).
void validate_data(const DataMatrix& data, Index expected_dim = -1);

}  // namespace song
