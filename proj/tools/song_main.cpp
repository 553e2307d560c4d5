// Command-line front end: dataset ingestion, training, incremental updates,
// evaluation, blob synthesis, and SVG scatter output. Every command honors
// --seed end to end and writes outputs atomically.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "song/evaluation.hpp"
#include "song/io.hpp"
#include "song/model.hpp"
#include "song/pca.hpp"
#include "song/svg.hpp"
#include "song/trainer.hpp"

namespace {

using nlohmann::json;

struct DataFlags {
    std::string path;
    std::string labels_path;  // IDX companion labels
    bool header = false;
    int label_col = -1;  // CSV label column, -1 = none
};

void add_data_flags(CLI::App* cmd, DataFlags& flags, bool required = true) {
    auto* opt = cmd->add_option("--data", flags.path, "Input dataset (CSV or IDX by extension)");
    if (required) opt->required();
    cmd->add_option("--labels", flags.labels_path, "IDX label file for IDX data");
    cmd->add_flag("--header", flags.header, "Skip the first CSV row");
    cmd->add_option("--label-col", flags.label_col, "0-based CSV label column");
}

bool looks_like_csv(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return false;
    std::string ext = path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    return ext == "csv" || ext == "txt";
}

song::DataMatrix load_dataset(const DataFlags& flags) {
    if (looks_like_csv(flags.path)) {
        std::optional<int> label_col;
        if (flags.label_col >= 0) label_col = flags.label_col;
        return song::load_csv(flags.path, flags.header, label_col);
    }
    std::optional<std::string> labels;
    if (!flags.labels_path.empty()) labels = flags.labels_path;
    return song::load_idx(flags.path, labels);
}

void emit(const std::string& key, const std::string& value, json& report) {
    std::cout << key << "=" << value << "\n";
    report[key] = value;
}

void emit(const std::string& key, double value, json& report) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    std::cout << key << "=" << buf << "\n";
    report[key] = value;
}

void emit(const std::string& key, long long value, json& report) {
    std::cout << key << "=" << value << "\n";
    report[key] = value;
}

void emit_train_report(const song::TrainReport& tr, const song::SongModel& model, json& report) {
    emit("epochs_run", static_cast<long long>(tr.epochs_run), report);
    emit("terminated_early", static_cast<long long>(tr.terminated_early ? 1 : 0), report);
    emit("growth_events", static_cast<long long>(tr.growth_events), report);
    emit("final_qe", tr.final_qe, report);
    emit("final_alpha", tr.final_alpha, report);
    const int last_changes =
        tr.edge_changes_per_epoch.empty() ? 0 : tr.edge_changes_per_epoch.back();
    emit("edge_changes_last_epoch", static_cast<long long>(last_changes), report);
    emit("nodes", static_cast<long long>(model.node_count()), report);
    report["edge_changes_per_epoch"] = tr.edge_changes_per_epoch;
}

void write_report(const std::string& report_path, const json& report) {
    if (report_path.empty()) return;
    song::atomic_write_file(report_path, report.dump(2) + "\n");
}

struct HyperFlags {
    song::HyperParams hp;
    void attach(CLI::App* cmd) {
        cmd->add_option("--k", hp.k, "Neighborhood size");
        cmd->add_option("--t-max", hp.t_max, "Maximum epochs");
        cmd->add_option("--alpha0", hp.alpha_0, "Initial learning rate");
        cmd->add_option("--kernel-a", hp.a, "Output kernel coefficient");
        cmd->add_option("--kernel-b", hp.b, "Output kernel exponent");
        cmd->add_option("--edge-decay", hp.epsilon_decay, "Edge decay multiplier");
        cmd->add_option("--e-min", hp.e_min, "Edge pruning threshold");
        cmd->add_option("--theta-g", hp.theta_g, "Growth threshold (0 = adaptive)");
        cmd->add_option("--neg-rate", hp.neg_rate, "Negative samples per positive edge");
        cmd->add_option("--dist-floor", hp.dist_floor, "Embedding distance clamp");
        cmd->add_option("--max-nodes", hp.max_nodes, "Node capacity");
        cmd->add_option("--seed", hp.seed, "Random seed");
        cmd->add_flag("--grow-with-input", hp.grow_with_input,
                      "Include the sample in growth centroids");
        cmd->add_flag("!--no-replay", hp.replay_old, "Train increments without replaying old data");
    }
};

int cmd_fit(const DataFlags& data_flags, const HyperFlags& hyper_flags, int dims, int pca_components,
            const std::string& model_out, const std::string& report_path) {
    json report;
    song::DataMatrix data = load_dataset(data_flags);
    if (data.size() == 0) throw std::runtime_error("fit: dataset is empty");

    song::HyperParams hp = hyper_flags.hp;
    std::optional<song::PcaProjection> proj;
    if (pca_components > 0) {
        proj = song::pca_fit(data.rows, pca_components);
        data.rows = song::pca_apply(*proj, data.rows);
    }

    song::DataBounds bounds;
    bounds.lo = data.rows.colwise().minCoeff();
    bounds.hi = data.rows.colwise().maxCoeff();

    song::SongModel model = song::init_model(data.dim(), dims, hp, bounds);
    model.pca = proj;
    const song::TrainReport tr = song::fit(model, data);
    song::save_model(model, model_out);

    emit("input_dim", static_cast<long long>(model.input_dim()), report);
    emit("output_dim", static_cast<long long>(model.output_dim()), report);
    emit_train_report(tr, model, report);
    emit("model", model_out, report);
    write_report(report_path, report);
    return 0;
}

int cmd_grow(const DataFlags& data_flags, const std::string& model_in,
             const std::string& model_out, const std::string& report_path) {
    json report;
    song::SongModel model = song::load_model(model_in);
    song::DataMatrix increment = load_dataset(data_flags);
    if (model.pca && increment.size() > 0) {
        if (increment.dim() != model.pca->input_dim())
            throw std::runtime_error("grow: increment dimension does not match stored projection");
        increment.rows = song::pca_apply(*model.pca, increment.rows);
    }

    // Displacement of the points already represented, before vs after.
    const song::RowMatrixXd retained = model.reference_data;
    song::DataMatrix retained_data;
    retained_data.rows = retained;
    song::RowMatrixXd y_before(0, model.output_dim());
    if (retained.rows() > 0) y_before = song::transform(model, retained_data);

    const song::TrainReport tr = song::partial_fit(model, increment);

    song::DisplacementStats cdy;
    if (retained.rows() > 0) {
        const song::RowMatrixXd y_after = song::transform(model, retained_data);
        cdy = song::consecutive_displacement(y_before, y_after);
    }

    song::save_model(model, model_out);
    emit("increment_rows", static_cast<long long>(increment.size()), report);
    emit_train_report(tr, model, report);
    emit("cdy_mean", cdy.mean, report);
    emit("cdy_std", cdy.stddev, report);
    emit("model", model_out, report);
    write_report(report_path, report);
    return 0;
}

int cmd_eval(const DataFlags& data_flags, const std::string& model_in, int k, int repeats,
             std::uint64_t seed, const std::string& report_path) {
    json report;
    song::SongModel model = song::load_model(model_in);
    song::DataMatrix data = load_dataset(data_flags);
    if (!data.labels) throw std::runtime_error("eval: dataset has no labels");
    if (model.pca) data.rows = song::pca_apply(*model.pca, data.rows);

    const song::RowMatrixXd embedding = song::transform(model, data);

    if (k <= 0) {
        std::vector<int> sorted = *data.labels;
        std::sort(sorted.begin(), sorted.end());
        k = static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }

    Eigen::VectorXd ami(repeats);
    for (int rep = 0; rep < repeats; ++rep) {
        const std::vector<int> clustering =
            song::kmeans(embedding, k, seed + static_cast<std::uint64_t>(rep));
        ami(rep) = song::adjusted_mutual_information(*data.labels, clustering);
    }
    const double mean = ami.mean();
    const double stddev = std::sqrt((ami.array() - mean).square().mean());

    emit("k", static_cast<long long>(k), report);
    emit("repeats", static_cast<long long>(repeats), report);
    emit("ami_mean", mean, report);
    emit("ami_std", stddev, report);
    emit("ami_max", ami.maxCoeff(), report);
    write_report(report_path, report);
    return 0;
}

int cmd_plot(const DataFlags& data_flags, const std::string& embedding_csv,
             const std::string& model_in, const std::string& svg_out, double point_size,
             bool color_by_label) {
    song::RowMatrixXd points;
    std::optional<std::vector<int>> labels;

    if (!embedding_csv.empty()) {
        std::optional<int> label_col;
        if (data_flags.label_col >= 0) label_col = data_flags.label_col;
        const song::DataMatrix emb = song::load_csv(embedding_csv, data_flags.header, label_col);
        points = emb.rows;
        labels = emb.labels;
    } else {
        if (model_in.empty() || data_flags.path.empty())
            throw std::runtime_error("plot: need --embedding or both --model and --data");
        song::SongModel model = song::load_model(model_in);
        song::DataMatrix data = load_dataset(data_flags);
        if (model.pca) data.rows = song::pca_apply(*model.pca, data.rows);
        points = song::transform(model, data);
        labels = data.labels;
    }

    if (points.cols() != 2) throw std::runtime_error("plot: embedding must be 2-D");
    song::ScatterStyle style;
    style.point_size = point_size;
    style.color_by_label = color_by_label;
    song::write_scatter_svg(points, labels, svg_out, style);
    std::cout << "svg=" << svg_out << "\n";
    std::cout << "points=" << points.rows() << "\n";
    return 0;
}

int cmd_blobs(const song::BlobSpec& spec, const std::string& csv_out) {
    const song::DataMatrix data = song::make_blobs(spec);
    song::write_csv(data, csv_out);
    std::cout << "rows=" << data.size() << "\n";
    std::cout << "dims=" << data.dim() << "\n";
    std::cout << "csv=" << csv_out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental graph-based dimensionality reduction"};
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "Train a new model on a dataset");
    DataFlags fit_data;
    HyperFlags fit_hyper;
    int fit_dims = 2;
    int fit_pca = 0;
    std::string fit_out, fit_report;
    add_data_flags(fit, fit_data);
    fit_hyper.attach(fit);
    fit->add_option("--dims", fit_dims, "Output dimensionality");
    fit->add_option("--pca", fit_pca, "Project to this many principal components first");
    fit->add_option("--out", fit_out, "Model output path")->required();
    fit->add_option("--report", fit_report, "Machine-readable JSON report path");

    // grow
    auto* grow = app.add_subcommand("grow", "Continue training a saved model on new data");
    DataFlags grow_data;
    std::string grow_in, grow_out, grow_report;
    add_data_flags(grow, grow_data);
    grow->add_option("--model-in", grow_in, "Existing model path")->required();
    grow->add_option("--model-out", grow_out, "Updated model path")->required();
    grow->add_option("--report", grow_report, "Machine-readable JSON report path");

    // eval
    auto* eval = app.add_subcommand("eval", "Cluster the embedding and score against labels");
    DataFlags eval_data;
    std::string eval_model, eval_report;
    int eval_k = 0;
    int eval_repeats = 5;
    std::uint64_t eval_seed = 42;
    add_data_flags(eval, eval_data);
    eval->add_option("--model", eval_model, "Model path")->required();
    eval->add_option("--k", eval_k, "k-means cluster count (default: distinct labels)");
    eval->add_option("--repeats", eval_repeats, "Clustering restarts to aggregate");
    eval->add_option("--seed", eval_seed, "Random seed");
    eval->add_option("--report", eval_report, "Machine-readable JSON report path");

    // plot
    auto* plot = app.add_subcommand("plot", "Render a 2-D embedding as an SVG scatter");
    DataFlags plot_data;
    std::string plot_embedding, plot_model, plot_out;
    double plot_point_size = 2.5;
    bool plot_color = true;
    add_data_flags(plot, plot_data, /*required=*/false);
    plot->add_option("--embedding", plot_embedding, "Embedding CSV (alternative to model+data)");
    plot->add_option("--model", plot_model, "Model path (with --data)");
    plot->add_option("--out", plot_out, "SVG output path")->required();
    plot->add_option("--point-size", plot_point_size, "Circle radius in pixels");
    plot->add_flag("!--no-color-by-label", plot_color, "Single color even when labels exist");

    // blobs
    auto* blobs = app.add_subcommand("blobs", "Generate a labeled Gaussian blob dataset");
    song::BlobSpec spec;
    std::string blobs_out;
    blobs->add_option("--clusters", spec.n_clusters, "Number of clusters");
    blobs->add_option("--std", spec.cluster_std, "Cluster standard deviation");
    blobs->add_option("--dims", spec.dims, "Dimensionality");
    blobs->add_option("--points", spec.points_per_cluster, "Points per cluster");
    blobs->add_option("--seed", spec.seed, "Random seed");
    blobs->add_option("--out", blobs_out, "CSV output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed())
            return cmd_fit(fit_data, fit_hyper, fit_dims, fit_pca, fit_out, fit_report);
        if (grow->parsed()) return cmd_grow(grow_data, grow_in, grow_out, grow_report);
        if (eval->parsed())
            return cmd_eval(eval_data, eval_model, eval_k, eval_repeats, eval_seed, eval_report);
        if (plot->parsed())
            return cmd_plot(plot_data, plot_embedding, plot_model, plot_out, plot_point_size,
                            plot_color);
        if (blobs->parsed()) return cmd_blobs(spec, blobs_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
