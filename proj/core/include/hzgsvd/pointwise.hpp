// Solver configuration and the non-blocked solver, which also serves as the
// inner level of the blocked driver.
#pragma once

#include <cstddef>
#include <vector>

#include "hzgsvd/kernel2x2.hpp"
#include "hzgsvd/matrix.hpp"
#include "hzgsvd/strategy.hpp"

namespace hzg {

enum class Blocking { FB, BO };

struct SolverConfig {
  int variant_id = 0;
  StrategyKind outer_kind = StrategyKind::ME;
  StrategyKind inner_kind = StrategyKind::ME;
  Blocking blocking = Blocking::FB;
  bool sorting = true;
  std::size_t max_inner_sweeps = 30;
  std::size_t max_outer_sweeps = 30;
  std::size_t block_width = 8;
  bool fallback_qr = true;   // retry a block with QR when Cholesky fails
  bool always_qr = false;    // shorten every block with QR instead of Cholesky
  bool preprocess_qr = false;
  double gate_eps = kEps;
  std::size_t threads = 1;

  // Variant id bits: 4 selects C2, 2 disables prescaling, 1 enables
  // compensated dot products.
  Criterion criterion() const { return variant_id < 4 ? Criterion::C1 : Criterion::C2; }
  bool prescale() const { return (variant_id & 2) == 0; }
  bool compensated() const { return (variant_id & 1) != 0; }

  void set_blocking(Blocking b) {
    blocking = b;
    max_inner_sweeps = b == Blocking::FB ? 30 : 1;
  }
  void validate() const;
};

struct SweepStats {
  std::size_t total = 0;
  std::size_t big = 0;
  SweepStats& operator+=(const SweepStats& o) {
    total += o.total;
    big += o.big;
    return *this;
  }
};

// Scales F and G in place by diag(1/||g_j||) when `prescale`; returns the
// diagonal (all ones otherwise).
std::vector<double> prescale_init(Matrix& F, Matrix& G, bool prescale, bool compensated);

GsvdResult gsvd_1x1(const Matrix& F, const Matrix& G);

struct PointwiseResult {
  Matrix F;
  Matrix G;
  Matrix Z;
  SweepStats stats;
  std::size_t sweeps = 0;
  bool converged = false;
};

// Postmultiplies columns i, j of Y by the 2x2 transform.
void apply_transform(Matrix& Y, std::size_t i, std::size_t j, const Transform2x2& z);
void swap_columns(Matrix& Y, std::size_t i, std::size_t j);

PointwiseResult solve_pointwise(Matrix F, Matrix G, const SolverConfig& cfg, bool inner);

}  // namespace hzg
