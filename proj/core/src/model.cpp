#include "song/model.hpp"

#include <limits>
#include <stdexcept>

namespace song {

void HyperParams::validate() const {
    if (k < 2) throw std::invalid_argument("HyperParams: k must be at least 2");
    if (t_max < 1) throw std::invalid_argument("HyperParams: t_max must be positive");
    if (!(alpha_0 > 0.0)) throw std::invalid_argument("HyperParams: alpha_0 must be positive");
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("HyperParams: kernel parameters must be positive");
    if (!(epsilon_decay > 0.0 && epsilon_decay < 1.0))
        throw std::invalid_argument("HyperParams: epsilon_decay must be in (0,1)");
    if (!(e_min > 0.0 && e_min < 1.0))
        throw std::invalid_argument("HyperParams: e_min must be in (0,1)");
    if (theta_g < 0.0) throw std::invalid_argument("HyperParams: theta_g must be nonnegative");
    if (neg_rate < 1) throw std::invalid_argument("HyperParams: neg_rate must be positive");
    if (!(dist_floor > 0.0)) throw std::invalid_argument("HyperParams: dist_floor must be positive");
    if (!(disp_cap > 0.0)) throw std::invalid_argument("HyperParams: disp_cap must be positive");
    if (max_nodes < 2) throw std::invalid_argument("HyperParams: max_nodes too small");
}

SongModel::SongModel(Index input_dim, Index output_dim, HyperParams hp)
    : hyper(hp), rng(hp.seed), input_dim_(input_dim), output_dim_(output_dim) {
    if (input_dim < 1 || output_dim < 1)
        throw std::invalid_argument("SongModel: dimensions must be positive");
    if (output_dim >= input_dim)
        throw std::invalid_argument("SongModel: output_dim must be below input_dim");
    hyper.validate();
    const Index cap = std::min<Index>(std::max<Index>(16, output_dim + 1), hyper.max_nodes);
    c_store_ = RowMatrixXd::Zero(cap, input_dim_);
    e_store_ = Eigen::MatrixXd::Zero(cap, cap);
    y_store_ = RowMatrixXd::Zero(cap, output_dim_);
    g_store_ = Eigen::VectorXd::Zero(cap);
    reference_data.resize(0, input_dim_);
}

void SongModel::ensure_capacity(Index nodes) {
    const Index cap = c_store_.rows();
    if (nodes <= cap) return;
    Index new_cap = std::max(cap * 2, nodes);
    new_cap = std::min(new_cap, std::max(hyper.max_nodes, nodes));

    RowMatrixXd c = RowMatrixXd::Zero(new_cap, input_dim_);
    c.topRows(n_) = c_store_.topRows(n_);
    c_store_.swap(c);

    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(new_cap, new_cap);
    e.topLeftCorner(n_, n_) = e_store_.topLeftCorner(n_, n_);
    e_store_.swap(e);

    RowMatrixXd y = RowMatrixXd::Zero(new_cap, output_dim_);
    y.topRows(n_) = y_store_.topRows(n_);
    y_store_.swap(y);

    Eigen::VectorXd g = Eigen::VectorXd::Zero(new_cap);
    g.head(n_) = g_store_.head(n_);
    g_store_.swap(g);
}

Index SongModel::append_node(const Eigen::Ref<const Eigen::VectorXd>& coding_vector,
                             const Eigen::Ref<const Eigen::VectorXd>& embedding_row) {
    if (coding_vector.size() != input_dim_ || embedding_row.size() != output_dim_)
        throw std::invalid_argument("append_node: dimension mismatch");
    ensure_capacity(n_ + 1);
    c_store_.row(n_) = coding_vector.transpose();
    y_store_.row(n_) = embedding_row.transpose();
    g_store_(n_) = 0.0;
    return n_++;
}

bool SongModel::operator==(const SongModel& other) const {
    return input_dim_ == other.input_dim_ && output_dim_ == other.output_dim_ &&
           n_ == other.n_ && epoch == other.epoch && theta_g == other.theta_g &&
           hyper == other.hyper && coding_vectors() == other.coding_vectors() &&
           edges() == other.edges() && embedding() == other.embedding() &&
           growth_error() == other.growth_error() && rng == other.rng &&
           reference_data == other.reference_data &&
           pca.has_value() == other.pca.has_value() &&
           (!pca || (pca->mean == other.pca->mean && pca->components == other.pca->components));
}

SongModel init_model(Index input_dim, Index output_dim, const HyperParams& hyper,
                     const std::optional<DataBounds>& data_bounds) {
    SongModel model(input_dim, output_dim, hyper);
    if (data_bounds) {
        if (data_bounds->lo.size() != input_dim || data_bounds->hi.size() != input_dim)
            throw std::invalid_argument("init_model: bounds dimension mismatch");
        if ((data_bounds->hi.array() < data_bounds->lo.array()).any())
            throw std::invalid_argument("init_model: bounds must satisfy lo <= hi");
    }

    const Index n0 = output_dim + 1;
    Eigen::VectorXd c(input_dim);
    Eigen::VectorXd y(output_dim);
    for (Index i = 0; i < n0; ++i) {
        for (Index j = 0; j < input_dim; ++j) {
            const double lo = data_bounds ? data_bounds->lo(j) : 0.0;
            const double hi = data_bounds ? data_bounds->hi(j) : 1.0;
            c(j) = model.rng.uniform(lo, hi);
        }
        for (Index j = 0; j < output_dim; ++j) y(j) = model.rng.uniform(-1.0, 1.0);
        model.append_node(c, y);
    }
    return model;
}

void validate_data(const DataMatrix& data, Index expected_dim) {
    if (data.size() < 1) throw std::invalid_argument("data matrix is empty");
    if (expected_dim >= 0 && data.dim() != expected_dim)
        throw std::invalid_argument("data dimension mismatch");
    if (!data.rows.allFinite()) throw std::invalid_argument("data contains NaN or Inf");
    if (data.labels && static_cast<Index>(data.labels->size()) != data.size())
        throw std::invalid_argument("label count does not match row count");
}

namespace {

// Index of the nearest coding vector; ties break toward the lower index.
Index nearest_index(const SongModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                    double* dist2_out = nullptr) {
    const auto C = model.coding_vectors();
    Index best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < C.rows(); ++j) {
        const double d2 = (C.row(j) - x).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    if (dist2_out) *dist2_out = best_d2;
    return best;
}

}  // namespace

RowMatrixXd transform(const SongModel& model, const DataMatrix& points) {
    validate_data(points, model.input_dim());
    const auto Y = model.embedding();
    RowMatrixXd out(points.size(), model.output_dim());
    for (Index i = 0; i < points.size(); ++i)
        out.row(i) = Y.row(nearest_index(model, points.rows.row(i)));
    return out;
}

double quantization_error(const SongModel& model, const DataMatrix& points) {
    validate_data(points, model.input_dim());
    double total = 0.0;
    for (Index i = 0; i < points.size(); ++i) {
        double d2 = 0.0;
        nearest_index(model, points.rows.row(i), &d2);
        total += 0.5 * d2;
    }
    return total / static_cast<double>(points.size());
}

}  // namespace song
