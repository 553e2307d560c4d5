/**
 * @file evaluation.hpp
 * @brief Embedding quality metrics and synthetic datasets.
 *
 * Covers the quantitative pipeline: k-means clustering of embeddings,
 * chance-corrected agreement with ground truth (AMI), per-point displacement
 * between consecutive embeddings of the same rows, and isotropic Gaussian
 * blob synthesis.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "song/types.hpp"

namespace song {

struct BlobSpec {
    int n_clusters = 10;
    double cluster_std = 4.0;
    int dims = 60;
    int points_per_cluster = 200;
    std::uint64_t seed = 0;
};

struct KMeansResult {
    std::vector<int> labels;
    double inertia = 0.0;   // within-cluster sum of squared distances
    RowMatrixXd centers;
};

/// One seeded Lloyd run from k-means++ style centers; iterates to an
/// assignment fixpoint or 300 rounds. Deterministic per seed.
KMeansResult kmeans_run(const Eigen::Ref<const RowMatrixXd>& points, int k, std::uint64_t seed);

/// Labels from a single seeded run.
std::vector<int> kmeans(const Eigen::Ref<const RowMatrixXd>& points, int k, std::uint64_t seed);

/// Best of `restarts` seeded runs by inertia (seeds seed, seed+1, ...).
KMeansResult kmeans_best(const Eigen::Ref<const RowMatrixXd>& points, int k, int restarts,
                         std::uint64_t seed);

/// Adjusted Mutual Information under the permutation model with natural-log
/// entropies: (MI - E[MI]) / (mean(Ha, Hb) - E[MI]). 1 for partitions that
/// are identical up to relabeling, about 0 for independent ones.
double adjusted_mutual_information(const std::vector<int>& labels_a,
                                   const std::vector<int>& labels_b);

struct DisplacementStats {
    double mean = 0.0;
    double stddev = 0.0;   // population standard deviation
    Eigen::VectorXd per_point;
};

/// Euclidean displacement of each aligned row between two embeddings of the
/// same points, with mean and standard deviation.
DisplacementStats consecutive_displacement(const Eigen::Ref<const RowMatrixXd>& y_prev,
                                           const Eigen::Ref<const RowMatrixXd>& y_curr);

/// Isotropic Gaussian clusters around centers drawn uniformly in
/// [-10, 10]^dims; deterministic per seed, labels attached.
DataMatrix make_blobs(const BlobSpec& spec);

}  // namespace song
