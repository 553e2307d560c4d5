#include "song/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "song/rng.hpp"

namespace song {

namespace {

// Squared distance from each row to its nearest center; assignment with ties
// toward the lower center index.
void assign_points(const Eigen::Ref<const RowMatrixXd>& points, const RowMatrixXd& centers,
                   std::vector<int>& labels, Eigen::VectorXd& dist2) {
    const Index n = points.rows();
    const Index k = centers.rows();
    for (Index i = 0; i < n; ++i) {
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < k; ++c) {
            const double d2 = (points.row(i) - centers.row(c)).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
        dist2(i) = best_d2;
    }
}

}  // namespace

KMeansResult kmeans_run(const Eigen::Ref<const RowMatrixXd>& points, int k, std::uint64_t seed) {
    const Index n = points.rows();
    if (k < 1) throw std::invalid_argument("kmeans: k must be positive");
    if (static_cast<Index>(k) > n) throw std::invalid_argument("kmeans: k exceeds point count");

    Rng rng(seed);
    RowMatrixXd centers(k, points.cols());
    Eigen::VectorXd nearest_d2 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());

    // k-means++ seeding: first center uniform, the rest D^2-weighted.
    centers.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
    for (int c = 1; c < k; ++c) {
        for (Index i = 0; i < n; ++i) {
            const double d2 = (points.row(i) - centers.row(c - 1)).squaredNorm();
            nearest_d2(i) = std::min(nearest_d2(i), d2);
        }
        const double total = nearest_d2.sum();
        Index pick = 0;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            for (Index i = 0; i < n; ++i) {
                acc += nearest_d2(i);
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = points.row(pick);
    }

    KMeansResult result;
    result.labels.assign(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd dist2(n);
    std::vector<int> prev;

    for (int iter = 0; iter < 300; ++iter) {
        assign_points(points, centers, result.labels, dist2);
        if (result.labels == prev) break;
        prev = result.labels;

        RowMatrixXd sums = RowMatrixXd::Zero(k, points.cols());
        std::vector<Index> counts(static_cast<std::size_t>(k), 0);
        for (Index i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(result.labels[static_cast<std::size_t>(i)]);
            sums.row(static_cast<Index>(c)) += points.row(i);
            ++counts[c];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            } else {
                // Re-seed an empty cluster at the point farthest from its center.
                Index far = 0;
                dist2.maxCoeff(&far);
                centers.row(c) = points.row(far);
                dist2(far) = 0.0;
            }
        }
    }

    assign_points(points, centers, result.labels, dist2);
    result.inertia = dist2.sum();
    result.centers = std::move(centers);
    return result;
}

std::vector<int> kmeans(const Eigen::Ref<const RowMatrixXd>& points, int k, std::uint64_t seed) {
    return kmeans_run(points, k, seed).labels;
}

KMeansResult kmeans_best(const Eigen::Ref<const RowMatrixXd>& points, int k, int restarts,
                         std::uint64_t seed) {
    if (restarts < 1) throw std::invalid_argument("kmeans_best: restarts must be positive");
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        KMeansResult run = kmeans_run(points, k, seed + static_cast<std::uint64_t>(r));
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return best;
}

double adjusted_mutual_information(const std::vector<int>& labels_a,
                                   const std::vector<int>& labels_b) {
    if (labels_a.size() != labels_b.size())
        throw std::invalid_argument("adjusted_mutual_information: length mismatch");
    if (labels_a.size() < 2)
        throw std::invalid_argument("adjusted_mutual_information: need at least 2 points");

    const auto n = static_cast<double>(labels_a.size());

    std::map<int, Index> ia, ib;
    for (const int v : labels_a) ia.emplace(v, static_cast<Index>(ia.size()));
    for (const int v : labels_b) ib.emplace(v, static_cast<Index>(ib.size()));
    const auto ra = static_cast<Index>(ia.size());
    const auto rb = static_cast<Index>(ib.size());

    Eigen::MatrixXd cont = Eigen::MatrixXd::Zero(ra, rb);
    for (std::size_t i = 0; i < labels_a.size(); ++i)
        cont(ia.at(labels_a[i]), ib.at(labels_b[i])) += 1.0;
    const Eigen::VectorXd am = cont.rowwise().sum();
    const Eigen::VectorXd bm = cont.colwise().sum();

    double mi = 0.0;
    for (Index i = 0; i < ra; ++i)
        for (Index j = 0; j < rb; ++j)
            if (cont(i, j) > 0.0)
                mi += cont(i, j) / n * std::log(n * cont(i, j) / (am(i) * bm(j)));

    double ha = 0.0, hb = 0.0;
    for (Index i = 0; i < ra; ++i) ha -= am(i) / n * std::log(am(i) / n);
    for (Index j = 0; j < rb; ++j) hb -= bm(j) / n * std::log(bm(j) / n);
    if (ha == 0.0 && hb == 0.0) return 1.0;  // both partitions trivial

    // Expected MI under the permutation model (hypergeometric cell counts).
    double emi = 0.0;
    for (Index i = 0; i < ra; ++i) {
        for (Index j = 0; j < rb; ++j) {
            const double ai = am(i), bj = bm(j);
            const auto lo = static_cast<long>(std::max(1.0, ai + bj - n));
            const auto hi = static_cast<long>(std::min(ai, bj));
            for (long nij = lo; nij <= hi; ++nij) {
                const auto x = static_cast<double>(nij);
                const double log_p = std::lgamma(ai + 1) + std::lgamma(bj + 1) +
                                     std::lgamma(n - ai + 1) + std::lgamma(n - bj + 1) -
                                     std::lgamma(n + 1) - std::lgamma(x + 1) -
                                     std::lgamma(ai - x + 1) - std::lgamma(bj - x + 1) -
                                     std::lgamma(n - ai - bj + x + 1);
                emi += x / n * std::log(n * x / (ai * bj)) * std::exp(log_p);
            }
        }
    }

    const double denom = 0.5 * (ha + hb) - emi;
    if (denom == 0.0) return 0.0;
    return (mi - emi) / denom;
}

DisplacementStats consecutive_displacement(const Eigen::Ref<const RowMatrixXd>& y_prev,
                                           const Eigen::Ref<const RowMatrixXd>& y_curr) {
    if (y_prev.rows() != y_curr.rows() || y_prev.cols() != y_curr.cols())
        throw std::invalid_argument("consecutive_displacement: shape mismatch");
    DisplacementStats stats;
    const Index m = y_prev.rows();
    stats.per_point = Eigen::VectorXd::Zero(m);
    if (m == 0) return stats;
    for (Index i = 0; i < m; ++i) stats.per_point(i) = (y_curr.row(i) - y_prev.row(i)).norm();
    stats.mean = stats.per_point.mean();
    stats.stddev = std::sqrt((stats.per_point.array() - stats.mean).square().mean());
    return stats;
}

DataMatrix make_blobs(const BlobSpec& spec) {
    if (spec.n_clusters < 1 || spec.dims < 1 || spec.points_per_cluster < 1 ||
        !(spec.cluster_std >= 0.0))
        throw std::invalid_argument("make_blobs: invalid spec");

    Rng rng(spec.seed);
    RowMatrixXd centers(spec.n_clusters, spec.dims);
    for (int c = 0; c < spec.n_clusters; ++c)
        for (int d = 0; d < spec.dims; ++d) centers(c, d) = rng.uniform(-10.0, 10.0);

    DataMatrix data;
    data.rows.resize(static_cast<Index>(spec.n_clusters) * spec.points_per_cluster, spec.dims);
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(data.rows.rows()));
    Index row = 0;
    for (int c = 0; c < spec.n_clusters; ++c) {
        for (int p = 0; p < spec.points_per_cluster; ++p, ++row) {
            for (int d = 0; d < spec.dims; ++d)
                data.rows(row, d) = centers(c, d) + spec.cluster_std * rng.normal();
            labels.push_back(c);
        }
    }
    data.labels = std::move(labels);
    return data;
}

}  // namespace song
