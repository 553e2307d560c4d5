#include "song/pca.hpp"

#include <iostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace song {

PcaProjection pca_fit(const Eigen::Ref<const RowMatrixXd>& data, Eigen::Index n_components) {
    const Index n = data.rows();
    const Index d = data.cols();
    if (n < 1) throw std::invalid_argument("pca_fit: empty data");
    if (n_components < 1 || n_components > std::min(n, d))
        throw std::invalid_argument("pca_fit: n_components must be in [1, min(N, D)]");

    PcaProjection proj;
    proj.mean = data.colwise().mean();
    RowMatrixXd centered = data.rowwise() - proj.mean.transpose();

    const Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(std::max<Index>(n - 1, 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("pca_fit: eigendecomposition failed");

    // Eigenvalues come out ascending; take from the back.
    const Eigen::VectorXd evals = solver.eigenvalues();
    const Eigen::MatrixXd evecs = solver.eigenvectors();

    const double tol = std::max(evals.cwiseAbs().maxCoeff(), 1.0) * 1e-12;
    Index available = 0;
    for (Index i = d - 1; i >= 0 && evals(i) > tol; --i) ++available;
    Index keep = n_components;
    if (available < n_components) {
        keep = std::max<Index>(available, 1);
        std::cerr << "pca_fit: data rank " << available << " below requested "
                  << n_components << " components; returning " << keep << "\n";
    }

    proj.components.resize(keep, d);
    proj.variance.resize(keep);
    for (Index i = 0; i < keep; ++i) {
        proj.components.row(i) = evecs.col(d - 1 - i).transpose();
        proj.variance(i) = evals(d - 1 - i);
    }
    return proj;
}

RowMatrixXd pca_apply(const PcaProjection& proj, const Eigen::Ref<const RowMatrixXd>& data) {
    if (data.cols() != proj.input_dim())
        throw std::invalid_argument("pca_apply: dimension mismatch with fitted projection");
    return (data.rowwise() - proj.mean.transpose()) * proj.components.transpose();
}

DataMatrix pca_reduce(const DataMatrix& data, Eigen::Index n_components) {
    DataMatrix out;
    out.rows = pca_apply(pca_fit(data.rows, n_components), data.rows);
    out.labels = data.labels;
    return out;
}

}  // namespace song
