// Split-plane dense matrices and the problem/result records passed between
// the solver layers.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hzg {

enum class Field { Real, Complex };

enum class ErrorKind { Usage, Io, Rank, NotPositiveDefinite, Protocol, Singular };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Column-major real plane plus an optional imaginary plane of the same shape.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> re;
  std::vector<double> im;  // empty for real matrices
  bool is_complex = false;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, Field f = Field::Real)
      : rows(r), cols(c), re(r * c, 0.0), is_complex(f == Field::Complex) {
    if (is_complex) im.assign(r * c, 0.0);
  }

  static Matrix identity(std::size_t n, Field f = Field::Real) {
    Matrix m(n, n, f);
    for (std::size_t j = 0; j < n; ++j) m.re[j * n + j] = 1.0;
    return m;
  }

  Field field() const { return is_complex ? Field::Complex : Field::Real; }

  double& r(std::size_t i, std::size_t j) { return re[j * rows + i]; }
  double r(std::size_t i, std::size_t j) const { return re[j * rows + i]; }
  double& i(std::size_t i_, std::size_t j) { return im[j * rows + i_]; }
  double i(std::size_t i_, std::size_t j) const { return is_complex ? im[j * rows + i_] : 0.0; }
  // Imaginary part for reading through a mutable matrix; 0 for real data.
  double im_at(std::size_t i_, std::size_t j) const { return i(i_, j); }

  std::span<double> re_col(std::size_t j) { return {re.data() + j * rows, rows}; }
  std::span<const double> re_col(std::size_t j) const { return {re.data() + j * rows, rows}; }
  std::span<double> im_col(std::size_t j) {
    return is_complex ? std::span<double>(im.data() + j * rows, rows) : std::span<double>();
  }
  std::span<const double> im_col(std::size_t j) const {
    return is_complex ? std::span<const double>(im.data() + j * rows, rows)
                      : std::span<const double>();
  }

  bool operator==(const Matrix&) const = default;
};

// A column viewed as two planes; `im` is empty for real data.
struct ColView {
  std::span<const double> re;
  std::span<const double> im;
};

inline ColView col(const Matrix& m, std::size_t j) { return {m.re_col(j), m.im_col(j)}; }

// Copies columns [first, first+count) into a new matrix.
Matrix columns(const Matrix& m, std::size_t first, std::size_t count);
// Writes `src` into columns starting at `first`.
void set_columns(Matrix& m, std::size_t first, const Matrix& src);
Matrix conj_transpose(const Matrix& m);
// Plain product with an FMA chain over the inner index.
Matrix matmul(const Matrix& a, const Matrix& b);

struct ProblemPair {
  Matrix F;
  Matrix G;
  std::size_t original_n = 0;
  std::size_t original_mF = 0;
  std::size_t original_mG = 0;

  static ProblemPair make(Matrix f, Matrix g);
  std::size_t n() const { return F.cols; }
};

struct GsvdResult {
  Matrix U;
  Matrix V;
  Matrix Z;
  std::vector<double> sigmaF;
  std::vector<double> sigmaG;
  std::vector<double> sigma;
  std::size_t sweeps = 0;
  std::size_t total_transforms = 0;
  std::size_t big_transforms = 0;
  bool converged = false;
  std::size_t workers = 1;
};

}  // namespace hzg
