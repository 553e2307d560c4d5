#include "song/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace song {

namespace {

constexpr char kMagic[8] = {'S', 'O', 'N', 'G', 'M', 'O', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

class ByteWriter {
public:
    void put_u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void put_u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void put_u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void put_i64(std::int64_t v) { put_u64(static_cast<std::uint64_t>(v)); }
    void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }
    void put_bytes(const char* data, std::size_t len) { buf_.append(data, len); }
    const std::string& str() const { return buf_; }

private:
    std::string buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::string data) : data_(std::move(data)) {}

    std::uint8_t get_u8() { return static_cast<std::uint8_t>(take(1)[0]); }
    std::uint32_t get_u32() {
        const char* p = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
        return v;
    }
    std::uint64_t get_u64() {
        const char* p = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
        return v;
    }
    std::int64_t get_i64() { return static_cast<std::int64_t>(get_u64()); }
    double get_f64() { return std::bit_cast<double>(get_u64()); }
    std::string get_bytes(std::size_t len) { return {take(len), len}; }
    bool exhausted() const { return pos_ == data_.size(); }

private:
    const char* take(std::size_t len) {
        if (pos_ + len > data_.size())
            throw std::runtime_error("load_model: file truncated");
        const char* p = data_.data() + pos_;
        pos_ += len;
        return p;
    }
    std::string data_;
    std::size_t pos_ = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_double(std::string_view cell, Index row, Index col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::runtime_error("CSV parse error at row " + std::to_string(row) + ", column " +
                                 std::to_string(col) + ": non-numeric cell");
    if (!std::isfinite(value))
        throw std::runtime_error("CSV parse error at row " + std::to_string(row) + ", column " +
                                 std::to_string(col) + ": non-finite value");
    return value;
}

int parse_label(std::string_view cell, Index row, Index col) {
    int value = 0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw std::runtime_error("CSV parse error at row " + std::to_string(row) + ", column " +
                                 std::to_string(col) + ": label is not an integer");
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

DataMatrix load_csv(const std::string& path, bool has_header, std::optional<int> label_column) {
    const std::string content = read_file(path);

    std::vector<std::vector<std::string_view>> rows;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string_view line(content.data() + start, end - start);
        if (!trim(line).empty()) {
            std::vector<std::string_view> cells;
            std::size_t cs = 0;
            while (true) {
                std::size_t ce = line.find(',', cs);
                if (ce == std::string_view::npos) {
                    cells.push_back(trim(line.substr(cs)));
                    break;
                }
                cells.push_back(trim(line.substr(cs, ce - cs)));
                cs = ce + 1;
            }
            rows.push_back(std::move(cells));
        }
        if (end == content.size()) break;
        start = end + 1;
    }

    if (has_header && !rows.empty()) rows.erase(rows.begin());

    DataMatrix data;
    if (rows.empty()) {
        data.rows.resize(0, 0);
        return data;
    }

    const auto width = static_cast<Index>(rows.front().size());
    if (label_column && (*label_column < 0 || *label_column >= width))
        throw std::runtime_error("load_csv: label column out of range");
    const Index feature_width = label_column ? width - 1 : width;
    if (feature_width < 1) throw std::runtime_error("load_csv: no feature columns");

    data.rows.resize(static_cast<Index>(rows.size()), feature_width);
    std::vector<int> labels;
    if (label_column) labels.reserve(rows.size());

    for (Index r = 0; r < static_cast<Index>(rows.size()); ++r) {
        const auto& cells = rows[static_cast<std::size_t>(r)];
        if (static_cast<Index>(cells.size()) != width)
            throw std::runtime_error("CSV parse error at row " + std::to_string(r) +
                                     ": ragged row (expected " + std::to_string(width) +
                                     " cells, got " + std::to_string(cells.size()) + ")");
        Index f = 0;
        for (Index c = 0; c < width; ++c) {
            if (label_column && c == *label_column) {
                labels.push_back(parse_label(cells[static_cast<std::size_t>(c)], r, c));
            } else {
                data.rows(r, f++) = parse_double(cells[static_cast<std::size_t>(c)], r, c);
            }
        }
    }
    if (label_column) data.labels = std::move(labels);
    return data;
}

void write_csv(const DataMatrix& data, const std::string& path) {
    std::string out;
    char cell[40];
    for (Index r = 0; r < data.size(); ++r) {
        for (Index c = 0; c < data.dim(); ++c) {
            if (c) out.push_back(',');
            std::snprintf(cell, sizeof(cell), "%.17g", data.rows(r, c));
            out += cell;
        }
        if (data.labels) {
            out.push_back(',');
            out += std::to_string((*data.labels)[static_cast<std::size_t>(r)]);
        }
        out.push_back('\n');
    }
    atomic_write_file(path, out);
}

namespace {

// Big-endian IDX header: two zero bytes, dtype, dimension count, then one
// u32 size per dimension.
struct IdxPayload {
    std::vector<std::uint32_t> dims;
    std::string data;  // raw unsigned bytes
};

IdxPayload read_idx(const std::string& path) {
    const std::string content = read_file(path);
    if (content.size() < 4) throw std::runtime_error("IDX format error: truncated header in " + path);
    const auto u8 = [&](std::size_t i) { return static_cast<unsigned char>(content[i]); };
    if (u8(0) != 0 || u8(1) != 0)
        throw std::runtime_error("IDX format error: bad magic in " + path);
    if (u8(2) != 0x08)
        throw std::runtime_error("IDX format error: unsupported dtype (only unsigned byte) in " + path);
    const unsigned ndims = u8(3);
    if (ndims < 1 || ndims > 3)
        throw std::runtime_error("IDX format error: unsupported dimension count in " + path);
    if (content.size() < 4 + 4 * ndims)
        throw std::runtime_error("IDX format error: truncated header in " + path);

    IdxPayload out;
    std::size_t total = 1;
    for (unsigned d = 0; d < ndims; ++d) {
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v = (v << 8) | u8(4 + 4 * d + static_cast<unsigned>(b));
        out.dims.push_back(v);
        total *= v;
    }
    const std::size_t offset = 4 + 4 * ndims;
    if (content.size() < offset + total)
        throw std::runtime_error("IDX format error: truncated payload in " + path);
    out.data = content.substr(offset, total);
    return out;
}

}  // namespace

DataMatrix load_idx(const std::string& images_path, const std::optional<std::string>& labels_path) {
    const IdxPayload images = read_idx(images_path);
    if (images.dims.size() < 2)
        throw std::runtime_error("IDX format error: data file must have at least 2 dimensions");

    const auto n = static_cast<Index>(images.dims[0]);
    Index features = 1;
    for (std::size_t d = 1; d < images.dims.size(); ++d)
        features *= static_cast<Index>(images.dims[d]);

    DataMatrix data;
    data.rows.resize(n, features);
    for (Index i = 0; i < n; ++i)
        for (Index f = 0; f < features; ++f)
            data.rows(i, f) =
                static_cast<double>(static_cast<unsigned char>(
                    images.data[static_cast<std::size_t>(i * features + f)])) / 255.0;

    if (labels_path) {
        const IdxPayload labels = read_idx(*labels_path);
        if (labels.dims.size() != 1 || static_cast<Index>(labels.dims[0]) != n)
            throw std::runtime_error("IDX format error: label file does not match data rows");
        std::vector<int> lab(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i)
            lab[static_cast<std::size_t>(i)] =
                static_cast<unsigned char>(labels.data[static_cast<std::size_t>(i)]);
        data.labels = std::move(lab);
    }
    return data;
}

void save_model(const SongModel& model, const std::string& path) {
    ByteWriter w;
    w.put_bytes(kMagic, sizeof(kMagic));
    w.put_u32(kVersion);

    w.put_u64(static_cast<std::uint64_t>(model.input_dim()));
    w.put_u64(static_cast<std::uint64_t>(model.output_dim()));
    w.put_u64(static_cast<std::uint64_t>(model.node_count()));
    w.put_i64(model.epoch);

    const HyperParams& hp = model.hyper;
    w.put_u64(static_cast<std::uint64_t>(hp.k));
    w.put_u64(static_cast<std::uint64_t>(hp.t_max));
    w.put_f64(hp.alpha_0);
    w.put_f64(hp.a);
    w.put_f64(hp.b);
    w.put_f64(hp.epsilon_decay);
    w.put_f64(hp.e_min);
    w.put_f64(hp.theta_g);
    w.put_u64(static_cast<std::uint64_t>(hp.neg_rate));
    w.put_f64(hp.dist_floor);
    w.put_f64(hp.disp_cap);
    w.put_u64(hp.seed);
    w.put_u64(static_cast<std::uint64_t>(hp.max_nodes));
    w.put_u8(hp.grow_with_input ? 1 : 0);
    w.put_u8(hp.replay_old ? 1 : 0);

    w.put_f64(model.theta_g);

    const auto put_matrix = [&w](const auto& m) {
        for (Index r = 0; r < m.rows(); ++r)
            for (Index c = 0; c < m.cols(); ++c) w.put_f64(m(r, c));
    };
    put_matrix(model.coding_vectors());
    put_matrix(model.edges());
    put_matrix(model.embedding());
    for (Index i = 0; i < model.node_count(); ++i) w.put_f64(model.growth_error()(i));

    const std::string rng_state = model.rng.serialize();
    w.put_u64(rng_state.size());
    w.put_bytes(rng_state.data(), rng_state.size());

    w.put_u8(model.pca ? 1 : 0);
    if (model.pca) {
        w.put_u64(static_cast<std::uint64_t>(model.pca->input_dim()));
        w.put_u64(static_cast<std::uint64_t>(model.pca->n_components()));
        for (Index i = 0; i < model.pca->mean.size(); ++i) w.put_f64(model.pca->mean(i));
        put_matrix(model.pca->components);
        for (Index i = 0; i < model.pca->variance.size(); ++i) w.put_f64(model.pca->variance(i));
    }

    w.put_u64(static_cast<std::uint64_t>(model.reference_data.rows()));
    put_matrix(model.reference_data);

    atomic_write_file(path, w.str());
}

SongModel load_model(const std::string& path) {
    ByteReader r(read_file(path));

    const std::string magic = r.get_bytes(sizeof(kMagic));
    if (magic != std::string(kMagic, sizeof(kMagic)))
        throw std::runtime_error("load_model: not a model file (bad magic)");
    const std::uint32_t version = r.get_u32();
    if (version != kVersion)
        throw std::runtime_error("load_model: unsupported version " + std::to_string(version));

    const auto input_dim = static_cast<Index>(r.get_u64());
    const auto output_dim = static_cast<Index>(r.get_u64());
    const auto n = static_cast<Index>(r.get_u64());
    const std::int64_t epoch = r.get_i64();

    HyperParams hp;
    hp.k = static_cast<Index>(r.get_u64());
    hp.t_max = static_cast<Index>(r.get_u64());
    hp.alpha_0 = r.get_f64();
    hp.a = r.get_f64();
    hp.b = r.get_f64();
    hp.epsilon_decay = r.get_f64();
    hp.e_min = r.get_f64();
    hp.theta_g = r.get_f64();
    hp.neg_rate = static_cast<Index>(r.get_u64());
    hp.dist_floor = r.get_f64();
    hp.disp_cap = r.get_f64();
    hp.seed = r.get_u64();
    hp.max_nodes = static_cast<Index>(r.get_u64());
    hp.grow_with_input = r.get_u8() != 0;
    hp.replay_old = r.get_u8() != 0;

    SongModel model(input_dim, output_dim, hp);
    model.epoch = epoch;
    model.theta_g = r.get_f64();

    RowMatrixXd cm(n, input_dim);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < input_dim; ++j) cm(i, j) = r.get_f64();
    Eigen::MatrixXd em(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) em(i, j) = r.get_f64();
    RowMatrixXd ym(n, output_dim);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < output_dim; ++j) ym(i, j) = r.get_f64();
    Eigen::VectorXd gm(n);
    for (Index i = 0; i < n; ++i) gm(i) = r.get_f64();

    for (Index i = 0; i < n; ++i) model.append_node(cm.row(i).transpose(), ym.row(i).transpose());
    model.edges() = em;
    model.growth_error() = gm;

    const std::uint64_t rng_len = r.get_u64();
    model.rng = Rng::deserialize(r.get_bytes(rng_len));

    if (r.get_u8() != 0) {
        PcaProjection proj;
        const auto orig = static_cast<Index>(r.get_u64());
        const auto comps = static_cast<Index>(r.get_u64());
        proj.mean.resize(orig);
        for (Index i = 0; i < orig; ++i) proj.mean(i) = r.get_f64();
        proj.components.resize(comps, orig);
        for (Index i = 0; i < comps; ++i)
            for (Index j = 0; j < orig; ++j) proj.components(i, j) = r.get_f64();
        proj.variance.resize(comps);
        for (Index i = 0; i < comps; ++i) proj.variance(i) = r.get_f64();
        model.pca = std::move(proj);
    }

    const auto ref_rows = static_cast<Index>(r.get_u64());
    model.reference_data.resize(ref_rows, input_dim);
    for (Index i = 0; i < ref_rows; ++i)
        for (Index j = 0; j < input_dim; ++j) model.reference_data(i, j) = r.get_f64();

    if (!r.exhausted()) throw std::runtime_error("load_model: trailing bytes in model file");

    // Invariant audit before handing the model out.
    if (!model.coding_vectors().allFinite() || !model.embedding().allFinite() ||
        !model.growth_error().allFinite() || !model.edges().allFinite())
        throw std::runtime_error("load_model: non-finite state in model file");
    const auto& E = em;
    if (n > 0 && (E.minCoeff() < 0.0 || E.maxCoeff() > 1.0 ||
                  (E.diagonal().array() != 0.0).any()))
        throw std::runtime_error("load_model: edge matrix violates invariants");
    if ((model.growth_error().array() < 0.0).any())
        throw std::runtime_error("load_model: negative growth error");
    if (n < output_dim + 1)
        throw std::runtime_error("load_model: fewer nodes than an initialized model");

    return model;
}

void export_embedding(const SongModel& model, const DataMatrix& data, const std::string& path) {
    DataMatrix out;
    out.rows = transform(model, data);
    out.labels = data.labels;
    write_csv(out, path);
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace song
