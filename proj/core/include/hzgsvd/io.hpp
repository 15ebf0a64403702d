// Raw little-endian binary64 planes with a small text sidecar:
//   rows=<int>
//   cols=<int>
//   field=real|complex
#pragma once

#include <filesystem>

#include "hzgsvd/matrix.hpp"

namespace hzg {

// Default sidecar location for a matrix file: "<path>.hdr".
std::filesystem::path sidecar_path(const std::filesystem::path& data);

Matrix read_matrix(const std::filesystem::path& data, const std::filesystem::path& header);
inline Matrix read_matrix(const std::filesystem::path& data) {
  return read_matrix(data, sidecar_path(data));
}

// Writes the data file and its sidecar next to it.
void write_matrix(const Matrix& m, const std::filesystem::path& data);

// Pads columns to a multiple of `col_multiple` with unit "diagonal" entries in
// fresh rows, then pads rows of F and G with zeros to multiples of `row_multiple`.
ProblemPair border_pair(const ProblemPair& p, std::size_t col_multiple, std::size_t row_multiple);

}  // namespace hzg
