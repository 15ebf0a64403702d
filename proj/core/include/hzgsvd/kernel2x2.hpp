// Joint diagonalization of one 2x2 pivot pair (A, B) by a congruence Z,
// where A = [fi fj]^H [fi fj] and B = [gi gj]^H [gi gj] are never formed.
#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "hzgsvd/matrix.hpp"
#include "hzgsvd/scalar.hpp"

namespace hzg {

enum class Criterion { C1, C2 };

inline constexpr double kEps = 0x1p-52;

struct PivotPair2x2 {
  double a11 = 1.0, a22 = 1.0;
  Cplx a12;
  double b11 = 1.0, b22 = 1.0;
  Cplx b12;
  double d11 = 1.0, d22 = 1.0;
  bool is_complex = false;
};

struct TransformScalars {
  double x = 0, zeta = 0, t = 1, u = 0, v = 0, h = 0, tau = 1;
  double tan2theta = 0;  // cot(2 theta) in the real case
  double tangamma = 0;
  double xi = 0, eta = 0;
  bool exception = false;
};

// The congruence before the diagonal rescaler is folded in.
struct RawTransform {
  Cplx z11, z12, z21, z22;
  double cos_phi = 1, cos_psi = 1;  // unscaled cosines (entries times t)
  bool exception = false;
};

struct Transform2x2 {
  Cplx z11{1, 0}, z12, z21, z22{1, 0};
  bool swapped = false;
  bool applied = false;
  bool is_big = false;
  double a11pp = 0, a22pp = 0;  // predicted transformed diagonal of A
};

// With unit_b the B diagonal is taken as 1 without being computed (prescaled
// variants).
PivotPair2x2 form_pivot(ColView fi, ColView fj, ColView gi, ColView gj, bool compensated,
                        bool unit_b = false);

PivotPair2x2 rescale_pivot(PivotPair2x2 p);

bool relatively_orthogonal(const PivotPair2x2& p, std::size_t n, double eps = kEps);

std::pair<RawTransform, TransformScalars> transform_real(const PivotPair2x2& p);
std::pair<RawTransform, TransformScalars> transform_complex(const PivotPair2x2& p);

inline std::pair<RawTransform, TransformScalars> transform(const PivotPair2x2& p) {
  return p.is_complex ? transform_complex(p) : transform_real(p);
}

// zp empty means the gate passed (identity or swap only).
Transform2x2 finalize_transform(const std::optional<RawTransform>& zp, const PivotPair2x2& p,
                                bool sort, Criterion criterion);

// Diagonal of Z^H A Z for the two columns of Z.
std::pair<double, double> transformed_diagonal(Cplx z11, Cplx z12, Cplx z21, Cplx z22,
                                               const PivotPair2x2& p);

}  // namespace hzg
