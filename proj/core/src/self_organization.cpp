#include "song/self_organization.hpp"

#include <cmath>
#include <stdexcept>

#include "song/edge_curation.hpp"

namespace song {

int organize_coding_vectors(SongModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                            const NeighborSet& neighbors, double alpha) {
    if (x.size() != model.input_dim())
        throw std::invalid_argument("organize_coding_vectors: dimension mismatch");
    if (!(alpha > 0.0)) throw std::invalid_argument("organize_coding_vectors: alpha must be positive");
    if (neighbors.size() < 1)
        throw std::invalid_argument("organize_coding_vectors: empty neighbor set");

    const Index i1 = neighbors.winner();
    const double floor2 = model.hyper.dist_floor * model.hyper.dist_floor;
    const double dk = neighbors.distances.back();
    const double sigma2 = std::max(dk * dk, floor2);

    // The winner always moves, even before any edge exists around it.
    std::vector<Index> targets = symmetric_neighbors(model, i1);
    targets.insert(std::lower_bound(targets.begin(), targets.end(), i1), i1);

    auto C = model.coding_vectors();
    const auto xt = x.transpose();
    for (const Index j : targets) {
        const Eigen::RowVectorXd offset = xt - C.row(j);
        C.row(j) += alpha * std::exp(-offset.squaredNorm() / sigma2) * offset;
    }
    return static_cast<int>(targets.size());
}

}  // namespace song
