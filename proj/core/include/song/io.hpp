/**
 * @file io.hpp
 * @brief Dataset ingestion, model persistence, and embedding export.
 *
 * The model file is a single self-describing binary with a magic/version
 * header and explicit little-endian numeric encoding; saving the same model
 * twice produces byte-identical files. All writers go through a temp file
 * and rename so failures never leave partial output behind.
 */
#pragma once

#include <optional>
#include <string>

#include "song/model.hpp"
#include "song/types.hpp"

namespace song {

/// Parses a rectangular numeric CSV ('.' decimal, comma separated). The
/// optional 0-based label column is extracted into integer labels. Parse
/// errors report the offending row and column.
DataMatrix load_csv(const std::string& path, bool has_header = false,
                    std::optional<int> label_column = std::nullopt);

/// Writes features (17 significant digits, lossless round trip) with the
/// label column last when labels are present.
void write_csv(const DataMatrix& data, const std::string& path);

/// Reads an IDX unsigned-byte file (big-endian magic and dimension sizes).
/// Pixel intensities are scaled to [0, 1]; a companion 1-D IDX label file
/// may be supplied.
DataMatrix load_idx(const std::string& images_path,
                    const std::optional<std::string>& labels_path = std::nullopt);

/// Lossless model persistence, including RNG state, hyperparameters, the
/// retained replay rows, and any input projection.
void save_model(const SongModel& model, const std::string& path);
SongModel load_model(const std::string& path);

/// Transforms the points and writes the embedding coordinates, with the
/// data's labels as a trailing column when present.
void export_embedding(const SongModel& model, const DataMatrix& data, const std::string& path);

/// Writes content to path via a temporary file and rename.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace song
