#include "song/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "song/io.hpp"

namespace song {

namespace {

const char* kPalette[12] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_scatter_svg(const Eigen::Ref<const RowMatrixXd>& points,
                       const std::optional<std::vector<int>>& labels, const std::string& path,
                       const ScatterStyle& style) {
    if (points.cols() != 2)
        throw std::invalid_argument("write_scatter_svg: embedding must be 2-D");
    if (points.rows() < 1) throw std::invalid_argument("write_scatter_svg: no points");
    if (labels && static_cast<Index>(labels->size()) != points.rows())
        throw std::invalid_argument("write_scatter_svg: label count mismatch");

    const double canvas = 800.0;
    double min_x = points.col(0).minCoeff(), max_x = points.col(0).maxCoeff();
    double min_y = points.col(1).minCoeff(), max_y = points.col(1).maxCoeff();
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double margin = 0.05 * span;
    min_x -= margin;
    min_y -= margin;
    const double scale = canvas / (span + 2.0 * margin);

    // Stable palette assignment: sorted distinct labels cycle the 12 colors.
    std::map<int, int> color_of;
    if (labels && style.color_by_label)
        for (const int v : *labels) color_of.emplace(v, 0);
    int rank = 0;
    for (auto& [label, color] : color_of) color = rank++ % 12;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
           "height=\"800\" viewBox=\"0 0 800 800\">\n";
    svg += "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n<g>\n";

    const std::string r = fmt(style.point_size);
    for (Index i = 0; i < points.rows(); ++i) {
        const double cx = (points(i, 0) - min_x) * scale;
        const double cy = canvas - (points(i, 1) - min_y) * scale;  // y up
        const char* fill = "#1f77b4";
        if (labels && style.color_by_label)
            fill = kPalette[color_of.at((*labels)[static_cast<std::size_t>(i)])];
        svg += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + r + "\" fill=\"" +
               std::string(fill) + "\"/>\n";
    }
    svg += "</g>\n";

    if (!color_of.empty()) {
        svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
        int row = 0;
        for (const auto& [label, color] : color_of) {
            const double y0 = 16.0 + 18.0 * row;
            svg += "<rect x=\"10\" y=\"" + fmt(y0) + "\" width=\"12\" height=\"12\" fill=\"" +
                   std::string(kPalette[color]) + "\"/>\n";
            svg += "<text x=\"28\" y=\"" + fmt(y0 + 10.0) + "\">" + std::to_string(label) +
                   "</text>\n";
            ++row;
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    atomic_write_file(path, svg);
}

}  // namespace song
