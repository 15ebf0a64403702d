// Householder QR with an optional column pivoting pass.
#pragma once

#include <cstddef>
#include <vector>

#include "hzgsvd/matrix.hpp"
#include "hzgsvd/scalar.hpp"

namespace hzg {

struct HouseholderQR {
  Matrix packed;              // R on and above the diagonal, reflector tails below
  std::vector<Cplx> tau;
  std::vector<double> sign;   // +-1 applied to row k of R so its diagonal is >= 0
  std::vector<std::size_t> perm;  // column k of the factored matrix is input column perm[k]
};

// Throws ErrorKind::Rank when |r_kk| < cols * eps * ||input column||.
HouseholderQR householder_qr(const Matrix& A, bool pivot);

// Leading cols x cols upper triangle with nonnegative diagonal.
Matrix r_factor(const HouseholderQR& qr);

// First `cols` columns of Q, consistent with r_factor.
Matrix thin_q(const HouseholderQR& qr);

}  // namespace hzg
