#include "song/neighbor_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace song {

NeighborSet nearest_coding_vectors(const SongModel& model,
                                   const Eigen::Ref<const Eigen::VectorXd>& x, Index k) {
    if (x.size() != model.input_dim())
        throw std::invalid_argument("nearest_coding_vectors: query dimension mismatch");
    if (k < 1) throw std::invalid_argument("nearest_coding_vectors: k must be positive");

    const auto C = model.coding_vectors();
    const Index n = C.rows();
    const Index kk = std::min(k, n);

    Eigen::VectorXd d2(n);
    const auto xt = x.transpose();
    for (Index j = 0; j < n; ++j) d2(j) = (C.row(j) - xt).squaredNorm();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + kk, order.end(),
                      [&d2](Index lhs, Index rhs) {
                          if (d2(lhs) != d2(rhs)) return d2(lhs) < d2(rhs);
                          return lhs < rhs;
                      });

    NeighborSet out;
    out.indices.assign(order.begin(), order.begin() + kk);
    out.distances.resize(static_cast<std::size_t>(kk));
    for (Index i = 0; i < kk; ++i)
        out.distances[static_cast<std::size_t>(i)] = std::sqrt(d2(out.indices[static_cast<std::size_t>(i)]));
    return out;
}

}  // namespace song
