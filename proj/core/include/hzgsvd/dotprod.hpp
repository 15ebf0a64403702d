// Dot products, squared norms and the fixed-shape reduction tree. Every sum
// taken by the solver goes through here, so results never depend on how work
// is scheduled.
#pragma once

#include <span>

#include "hzgsvd/matrix.hpp"
#include "hzgsvd/scalar.hpp"

namespace hzg {

// Aborts the process when std::fma is not a true fused multiply-add.
void require_fused_fma();

// Pairwise tree over the values padded with +0.0 to a power-of-two length.
double tree_reduce(std::span<const double> values);

// Same tree; `err` collects the exact rounding error of every node addition.
struct TrackedSum {
  double sum = 0.0;
  double err = 0.0;
};
TrackedSum tree_reduce_tracked(std::span<const double> values);

// Principal (c) and residual (d) partial sums of two product streams.
struct CompensatedAccumulator {
  double c_r = 0.0;
  double c_i = 0.0;
  double d_r = 0.0;
  double d_i = 0.0;

  // e = d_r + d_i; s = (e + min(c_r, c_i)) + max(c_r, c_i)
  double combine() const;
};

struct CompensatedDot {
  CompensatedAccumulator re;
  CompensatedAccumulator im;
  Cplx value() const { return {re.combine(), im.combine()}; }
};

// sum of conj(a_t) * b_t (or a_t * b_t when !conjugate_first); real when both
// views have no imaginary plane.
Cplx dot_ordinary(ColView a, ColView b, bool conjugate_first = true);
CompensatedDot dot_compensated(ColView a, ColView b, bool conjugate_first = true);

double norm_sq(ColView v, bool compensated);
CompensatedAccumulator norm_sq_compensated(ColView v);

inline Cplx dot(ColView a, ColView b, bool compensated) {
  return compensated ? dot_compensated(a, b).value() : dot_ordinary(a, b);
}

}  // namespace hzg
