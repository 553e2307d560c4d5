/// Deterministic static SVG scatter rendering for 2-D embeddings.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "song/types.hpp"

namespace song {

struct ScatterStyle {
    double point_size = 2.5;
    bool color_by_label = true;
};

/// Writes one circle per point into an 800x800 canvas fitted to the data
/// with a 5% margin, cycling a 12-color categorical palette by label, with
/// a legend block when labels are present. Byte-identical across runs.
void write_scatter_svg(const Eigen::Ref<const RowMatrixXd>& points,
                       const std::optional<std::vector<int>>& labels, const std::string& path,
                       const ScatterStyle& style = {});

}  // namespace song
