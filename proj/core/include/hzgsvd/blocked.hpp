// Two-level blocked solver: block pairs of w columns are shortened to 2w x 2w
// triangular factors, diagonalized by the pointwise solver, and the resulting
// transforms are applied to the full block columns.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hzgsvd/matrix.hpp"
#include "hzgsvd/pointwise.hpp"
#include "hzgsvd/task_pool.hpp"

namespace hzg {

// Y^H Y with the upper triangle conjugated from the computed lower one.
Matrix grammian(const Matrix& Y, bool compensated);
std::pair<Matrix, Matrix> form_grammians(const Matrix& Fpq, const Matrix& Gpq, bool compensated);

// R^H R = M; throws ErrorKind::NotPositiveDefinite on a non-positive pivot.
Matrix cholesky_upper(const Matrix& M);

// R factor of [Yp Yq] with nonnegative diagonal; Q is not formed.
Matrix qr_shorten(const Matrix& Ypq);

// [Y_p Y_q] <- [Y_p Y_q] * Zt, for blocks of width w starting at columns
// p_first and q_first.
void postmultiply(Matrix& Y, std::size_t p_first, std::size_t q_first, std::size_t w,
                  const Matrix& Zt);

struct Extraction {
  std::vector<double> sigmaF, sigmaG, sigma;
};

// Scales Z columns by 1/sqrt(||f||^2 + ||g||^2). With `final`, also normalizes
// F and G columns and returns the generalized singular values.
Extraction rescale_z(Matrix& F, Matrix& G, Matrix& Z, bool final, bool compensated);

struct TallReduction {
  Matrix F;
  Matrix G;
  Matrix QF;
  Matrix QG;
  std::vector<std::size_t> perm;  // row perm[j] of Z receives row j of Z''
};

TallReduction preprocess_tall(const Matrix& F, const Matrix& G);

struct DriverOutcome {
  SweepStats stats;
  std::size_t sweeps = 0;
  bool converged = false;  // the last sweep had no big transforms
};

// Outer sweeps over the block columns of (F, G, Z), without prescaling and
// without the final extraction. Z has F.cols columns and any row count.
DriverOutcome run_block_sweeps(Matrix& F, Matrix& G, Matrix& Z, const SolverConfig& cfg,
                               std::size_t max_sweeps, TaskPool& pool);

// Bordered input (column count an even multiple of the block width).
GsvdResult gsvd_blocked(const ProblemPair& p, const SolverConfig& cfg, TaskPool* pool = nullptr);

// Any input: handles n = 1, optional tall-pair reduction, bordering and
// removal of the bordered columns afterwards.
GsvdResult solve(const ProblemPair& p, const SolverConfig& cfg);

// Drops bordered columns (Z columns supported only on padded rows) and
// trims padded rows.
GsvdResult unborder(const GsvdResult& r, std::size_t n, std::size_t mF, std::size_t mG);

}  // namespace hzg
