#include "song/embedding_layout.hpp"

#include <cmath>
#include <stdexcept>

#include "song/edge_curation.hpp"

namespace song {

namespace {

// The gradient factors diverge near coincidence faster than the distance
// clamp alone can tame; an uncapped near-field kick throws a row beyond the
// range the (1/distance) attraction can ever pull back from. Capping the
// displacement norm leaves direction and far-field magnitudes untouched.
Eigen::VectorXd cap_norm(Eigen::VectorXd v, double cap) {
    const double n = v.norm();
    if (n > cap) v *= cap / n;
    return v;
}

}  // namespace

double kernel_q(const Eigen::Ref<const Eigen::VectorXd>& y1,
                const Eigen::Ref<const Eigen::VectorXd>& y2, const KernelParams& kp) {
    if (y1.size() != y2.size()) throw std::invalid_argument("kernel_q: dimension mismatch");
    const double d2 = (y1 - y2).squaredNorm();
    return 1.0 / (1.0 + kp.a * std::pow(d2, kp.b));
}

Eigen::VectorXd attract(SongModel& model, Index i1, Index j, double e_hat, double alpha) {
    if (i1 == j) throw std::invalid_argument("attract: i1 and j must differ");
    if (i1 < 0 || j < 0 || i1 >= model.node_count() || j >= model.node_count())
        throw std::invalid_argument("attract: node index out of range");
    auto Y = model.embedding();
    const double a = model.hyper.a;
    const double b = model.hyper.b;

    const Eigen::VectorXd delta = (Y.row(i1) - Y.row(j)).transpose();
    const double dist = std::max(delta.norm(), model.hyper.dist_floor);
    const double coef =
        2.0 * a * b * e_hat * std::pow(dist, 2.0 * b - 2.0) / (1.0 + std::pow(dist, 2.0 * b));
    const Eigen::VectorXd disp = cap_norm(alpha * coef * delta, alpha * model.hyper.disp_cap);
    Y.row(j) += disp.transpose();
    return disp;
}

Eigen::VectorXd repulse(SongModel& model, Index i1, Index j, double alpha) {
    if (i1 == j) throw std::invalid_argument("repulse: i1 and j must differ");
    if (i1 < 0 || j < 0 || i1 >= model.node_count() || j >= model.node_count())
        throw std::invalid_argument("repulse: node index out of range");
    auto Y = model.embedding();
    const double b = model.hyper.b;
    const double floor = model.hyper.dist_floor;

    Eigen::VectorXd delta = (Y.row(i1) - Y.row(j)).transpose();
    double dist = delta.norm();
    if (dist == 0.0) {
        // Coincident pair: pick a direction at random and treat the pair as
        // if it sat at the clamp distance.
        delta = -model.rng.unit_vector(static_cast<int>(model.output_dim())) * floor;
        dist = floor;
    }
    const double dist_c = std::max(dist, floor);
    const double coef = 2.0 * b / (dist_c * dist_c * (1.0 + std::pow(dist_c, 2.0 * b)));
    const Eigen::VectorXd disp = cap_norm(-alpha * coef * delta, alpha * model.hyper.disp_cap);
    Y.row(j) += disp.transpose();
    return disp;
}

LayoutCounts layout_step(SongModel& model, Index i1, double alpha) {
    const Index n = model.node_count();
    if (i1 < 0 || i1 >= n) throw std::invalid_argument("layout_step: winner out of range");

    LayoutCounts counts;
    const std::vector<Index> positive = symmetric_neighbors(model, i1);
    for (const Index j : positive) {
        attract(model, i1, j, symmetric_strength(model, i1, j), alpha);
        ++counts.attractions;
    }

    const auto wanted = static_cast<std::size_t>(model.hyper.neg_rate) * positive.size();
    if (wanted == 0) return counts;

    const auto E = model.edges();
    std::vector<Index> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j)
        if (j != i1 && E(i1, j) == 0.0 && E(j, i1) == 0.0) pool.push_back(j);

    const std::size_t take = std::min(wanted, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
        // Partial Fisher-Yates draw without replacement.
        const auto pick = i + static_cast<std::size_t>(model.rng.below(pool.size() - i));
        std::swap(pool[i], pool[pick]);
        repulse(model, i1, pool[i], alpha);
        ++counts.repulsions;
    }
    return counts;
}

}  // namespace song
