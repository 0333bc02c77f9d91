#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "softzca/embedding_set.hpp"
#include "softzca/whitening.hpp"

namespace softzca::io {

enum class NpyDtype { kFloat32, kFloat64 };

struct NpyArray {
  RowMatrix data;
  NpyDtype dtype = NpyDtype::kFloat64;
};

// NPY subset: version 1.0 (2.0/3.0 headers are also read), little-endian
// '<f4' or '<f8', C order, exactly two dimensions.
std::string encode_npy(const RowMatrix& data, NpyDtype dtype = NpyDtype::kFloat64);
NpyArray decode_npy(std::string_view bytes);

NpyArray read_npy(const std::filesystem::path& path);
void write_npy(const std::filesystem::path& path, const RowMatrix& data,
               NpyDtype dtype = NpyDtype::kFloat64);

// One row per line, comma-separated decimal floats. Blank lines are skipped.
RowMatrix parse_csv_matrix(std::string_view text);
RowMatrix read_csv_matrix(const std::filesystem::path& path);
/// Writes with 17 significant digits so values survive a re-read exactly.
void write_csv_matrix(const std::filesystem::path& path, const RowMatrix& data);

/// Dispatches on extension: ".npy" or ".csv".
EmbeddingSet load_embeddings(const std::filesystem::path& path);
void save_embeddings(const std::filesystem::path& path, const EmbeddingSet& set);

/// {"count": N, "ids": [...]}; other keys are ignored.
struct PairManifest {
  std::size_t count = 0;
  std::vector<std::string> ids;
};

PairManifest read_manifest(const std::filesystem::path& path);

// Transform container:
//   6 bytes   magic "\x93WHTN" + '\x01'
//   4 bytes   little-endian uint32 header length H
//   H bytes   JSON header {"format_version", "method", "epsilon", "dim", ...},
//             space-padded so the payload starts on a 16-byte boundary
//   8*d       mean, little-endian float64
//   8*d*d     W, little-endian float64, row-major
std::string encode_transform(const WhiteningTransform& transform);
WhiteningTransform decode_transform(std::string_view bytes);

void write_transform(const std::filesystem::path& path, const WhiteningTransform& transform);
WhiteningTransform read_transform(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace softzca::io
