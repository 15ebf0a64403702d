#include "hzgsvd/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hzg {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

namespace fs = std::filesystem;

fs::path sidecar_path(const fs::path& data) {
  fs::path h = data;
  h += ".hdr";
  return h;
}

namespace {

void read_plane(std::ifstream& in, std::vector<double>& v, const fs::path& p) {
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
  if (!in) throw Error(ErrorKind::Io, "short read from " + p.string());
}

void write_plane(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
}

}  // namespace

Matrix read_matrix(const fs::path& data, const fs::path& header) {
  std::ifstream h(header);
  if (!h) throw Error(ErrorKind::Io, "cannot open sidecar " + header.string());
  long long rows = -1, cols = -1;
  std::string field;
  std::string line;
  while (std::getline(h, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Io, "bad sidecar line: " + line);
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    try {
      if (key == "rows") rows = std::stoll(val);
      else if (key == "cols") cols = std::stoll(val);
      else if (key == "field") field = val;
      else throw Error(ErrorKind::Io, "unknown sidecar key: " + key);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Io, "bad sidecar value: " + line);
    }
  }
  if (rows < 1 || cols < 1 || (field != "real" && field != "complex"))
    throw Error(ErrorKind::Io, "incomplete sidecar " + header.string());

  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
           field == "complex" ? Field::Complex : Field::Real);
  std::error_code ec;
  auto bytes = fs::file_size(data, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot stat " + data.string());
  std::uintmax_t want = m.re.size() * 8 * (m.is_complex ? 2 : 1);
  if (bytes != want)
    throw Error(ErrorKind::Io, "size mismatch: " + data.string() + " has " + std::to_string(bytes) +
                                   " bytes, sidecar implies " + std::to_string(want));
  std::ifstream in(data, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + data.string());
  read_plane(in, m.re, data);
  if (m.is_complex) read_plane(in, m.im, data);
  return m;
}

void write_matrix(const Matrix& m, const fs::path& data) {
  {
    std::ofstream out(data, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + data.string());
    write_plane(out, m.re);
    if (m.is_complex) write_plane(out, m.im);
    if (!out) throw Error(ErrorKind::Io, "write failed: " + data.string());
  }
  std::ofstream h(sidecar_path(data), std::ios::trunc);
  if (!h) throw Error(ErrorKind::Io, "cannot write sidecar for " + data.string());
  h << "rows=" << m.rows << "\ncols=" << m.cols << "\nfield=" << (m.is_complex ? "complex" : "real")
    << "\n";
}

namespace {

std::size_t round_up(std::size_t v, std::size_t k) { return (v + k - 1) / k * k; }

Matrix border_one(const Matrix& y, std::size_t n_new, std::size_t row_multiple) {
  const std::size_t extra = n_new - y.cols;
  const std::size_t rows = round_up(y.rows + extra, row_multiple);
  Matrix out(rows, n_new, y.field());
  for (std::size_t j = 0; j < y.cols; ++j)
    for (std::size_t i = 0; i < y.rows; ++i) {
      out.r(i, j) = y.r(i, j);
      if (y.is_complex) out.i(i, j) = y.i(i, j);
    }
  for (std::size_t k = 0; k < extra; ++k) out.r(y.rows + k, y.cols + k) = 1.0;
  return out;
}

}  // namespace

ProblemPair border_pair(const ProblemPair& p, std::size_t col_multiple, std::size_t row_multiple) {
  if (col_multiple == 0 || row_multiple == 0)
    throw Error(ErrorKind::Usage, "bordering multiples must be positive");
  ProblemPair out = p;
  const std::size_t n_new = round_up(p.F.cols, col_multiple);
  out.F = border_one(p.F, n_new, row_multiple);
  out.G = border_one(p.G, n_new, row_multiple);
  return out;
}

}  // namespace hzg
