#include "song/growth.hpp"

#include <stdexcept>

#include "song/edge_curation.hpp"

namespace song {

double accumulate_growth(SongModel& model, Index i1, double dist) {
    if (i1 < 0 || i1 >= model.node_count())
        throw std::invalid_argument("accumulate_growth: index out of range");
    if (dist < 0.0) throw std::invalid_argument("accumulate_growth: negative distance");
    auto G = model.growth_error();
    G(i1) += dist;
    return G(i1);
}

std::optional<Index> grow(SongModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                          const NeighborSet& neighbors) {
    if (neighbors.size() < 1) throw std::invalid_argument("grow: empty neighbor set");
    for (const Index idx : neighbors.indices)
        if (idx < 0 || idx >= model.node_count())
            throw std::invalid_argument("grow: neighbor index out of range");
    if (model.node_count() >= model.hyper.max_nodes) return std::nullopt;

    const Index i1 = neighbors.winner();
    const std::vector<Index> wiring = symmetric_neighbors(model, i1);

    Eigen::VectorXd c_new = Eigen::VectorXd::Zero(model.input_dim());
    Eigen::VectorXd y_new = Eigen::VectorXd::Zero(model.output_dim());
    {
        const auto C = model.coding_vectors();
        const auto Y = model.embedding();
        for (const Index l : neighbors.indices) {
            c_new += C.row(l).transpose();
            y_new += Y.row(l).transpose();
        }
        const auto k = static_cast<double>(neighbors.size());
        y_new /= k;
        if (model.hyper.grow_with_input) {
            c_new = (c_new + x) / (k + 1.0);
        } else {
            c_new /= k;
        }
    }

    const Index idx = model.append_node(c_new, y_new);
    auto E = model.edges();
    for (const Index l : neighbors.indices) E(l, idx) = 1.0;
    for (const Index j : wiring) E(idx, j) = 1.0;
    model.growth_error()(i1) = 0.0;
    return idx;
}

}  // namespace song
