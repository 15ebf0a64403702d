#include "hzgsvd/matrix.hpp"

#include <algorithm>

#include "hzgsvd/scalar.hpp"

namespace hzg {

Matrix columns(const Matrix& m, std::size_t first, std::size_t count) {
  Matrix out(m.rows, count, m.field());
  const std::size_t off = first * m.rows, len = count * m.rows;
  std::copy_n(m.re.begin() + off, len, out.re.begin());
  if (m.is_complex) std::copy_n(m.im.begin() + off, len, out.im.begin());
  return out;
}

void set_columns(Matrix& m, std::size_t first, const Matrix& src) {
  const std::size_t off = first * m.rows;
  std::copy(src.re.begin(), src.re.end(), m.re.begin() + off);
  if (m.is_complex) std::copy(src.im.begin(), src.im.end(), m.im.begin() + off);
}

Matrix conj_transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows, m.field());
  for (std::size_t j = 0; j < m.cols; ++j)
    for (std::size_t i = 0; i < m.rows; ++i) {
      t.r(j, i) = m.r(i, j);
      if (m.is_complex) t.i(j, i) = -m.i(i, j);
    }
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw Error(ErrorKind::Usage, "matmul: shape mismatch");
  const bool cx = a.is_complex || b.is_complex;
  Matrix c(a.rows, b.cols, cx ? Field::Complex : Field::Real);
  for (std::size_t j = 0; j < b.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i) {
      Cplx acc;
      for (std::size_t k = 0; k < a.cols; ++k)
        acc = zfma({a.r(i, k), a.i(i, k)}, {b.r(k, j), b.i(k, j)}, acc);
      c.r(i, j) = acc.re;
      if (cx) c.i(i, j) = acc.im;
    }
  return c;
}

ProblemPair ProblemPair::make(Matrix f, Matrix g) {
  if (f.cols != g.cols) throw Error(ErrorKind::Usage, "F and G must have the same column count");
  if (f.is_complex != g.is_complex) throw Error(ErrorKind::Usage, "F and G must share a field");
  if (std::min(f.rows, g.rows) < f.cols)
    throw Error(ErrorKind::Usage, "need min(rows(F), rows(G)) >= cols");
  ProblemPair p;
  p.original_n = f.cols;
  p.original_mF = f.rows;
  p.original_mG = g.rows;
  p.F = std::move(f);
  p.G = std::move(g);
  return p;
}

}  // namespace hzg
