#include "song/edge_curation.hpp"

#include <algorithm>
#include <stdexcept>

namespace song {

EdgeUpdateOutcome curate_edges(SongModel& model, const NeighborSet& neighbors) {
    if (neighbors.size() < 1) throw std::invalid_argument("curate_edges: empty neighbor set");
    auto E = model.edges();
    const Index n = model.node_count();
    for (const Index idx : neighbors.indices)
        if (idx < 0 || idx >= n)
            throw std::invalid_argument("curate_edges: neighbor index out of range");
    const Index i1 = neighbors.winner();
    const double eps = model.hyper.epsilon_decay;
    const double e_min = model.hyper.e_min;

    EdgeUpdateOutcome out;
    const auto in_neighbor_set = [&neighbors](Index j) {
        return std::find(neighbors.indices.begin(), neighbors.indices.end(), j) !=
               neighbors.indices.end();
    };

    for (Index j = 0; j < n; ++j) {
        if (j == i1) continue;  // diagonal stays zero
        const bool out_before = E(i1, j) > 0.0;
        if (in_neighbor_set(j)) {
            E(i1, j) = 1.0;
            ++out.renewed;
        } else if (out_before) {
            E(i1, j) *= eps;
            ++out.decayed;
            if (E(i1, j) < e_min) {
                E(i1, j) = 0.0;
                ++out.pruned;
            }
        }
        const bool out_after = E(i1, j) > 0.0;
        // Membership in the symmetric neighbor set flips only when the
        // outgoing edge flips and no incoming edge keeps it alive.
        if (out_before != out_after && E(j, i1) == 0.0) out.neighbor_set_changed = true;
    }
    return out;
}

Eigen::MatrixXd symmetrize(const Eigen::Ref<const Eigen::MatrixXd>& edges) {
    if (edges.rows() != edges.cols())
        throw std::invalid_argument("symmetrize: matrix must be square");
    return (edges + edges.transpose()) / 2.0;
}

std::vector<Index> neighbor_list(const Eigen::Ref<const Eigen::MatrixXd>& edges_sym, Index node) {
    if (node < 0 || node >= edges_sym.rows())
        throw std::invalid_argument("neighbor_list: node out of range");
    std::vector<Index> out;
    for (Index j = 0; j < edges_sym.cols(); ++j)
        if (j != node && edges_sym(node, j) > 0.0) out.push_back(j);
    return out;
}

double symmetric_strength(const SongModel& model, Index i, Index j) {
    const auto E = model.edges();
    return (E(i, j) + E(j, i)) / 2.0;
}

std::vector<Index> symmetric_neighbors(const SongModel& model, Index node) {
    const auto E = model.edges();
    const Index n = model.node_count();
    if (node < 0 || node >= n) throw std::invalid_argument("symmetric_neighbors: node out of range");
    std::vector<Index> out;
    for (Index j = 0; j < n; ++j)
        if (j != node && (E(node, j) > 0.0 || E(j, node) > 0.0)) out.push_back(j);
    return out;
}

}  // namespace song
