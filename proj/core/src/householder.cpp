#include "hzgsvd/householder.hpp"

#include <cmath>

#include "hzgsvd/dotprod.hpp"
#include "hzgsvd/kernel2x2.hpp"
#include "hzgsvd/pointwise.hpp"

namespace hzg {

namespace {

ColView tail(const Matrix& A, std::size_t c, std::size_t k) {
  ColView v = col(A, c);
  v.re = v.re.subspan(k);
  if (!v.im.empty()) v.im = v.im.subspan(k);
  return v;
}

Cplx at(const Matrix& A, std::size_t i, std::size_t j) { return {A.r(i, j), A.i(i, j)}; }

void put(Matrix& A, std::size_t i, std::size_t j, Cplx v) {
  A.r(i, j) = v.re;
  if (A.is_complex) A.i(i, j) = v.im;
}

Cplx cdiv(Cplx a, Cplx b) {
  const double d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

// Applies I - t v v^H to column c of A on rows k.., where v (with implicit
// leading 1) is stored in column `vc` of V below row k.
void reflect(Matrix& A, std::size_t c, const Matrix& V, std::size_t vc, std::size_t k, Cplx t) {
  if (t.re == 0.0 && t.im == 0.0) return;
  const std::size_t m = A.rows;
  // w = v^H a, with v_k = 1
  Cplx w = at(A, k, c);
  if (k + 1 < m) {
    Matrix vtail(m - k - 1, 1, V.field()), atail(m - k - 1, 1, A.field());
    for (std::size_t i = k + 1; i < m; ++i) {
      put(vtail, i - k - 1, 0, at(V, i, vc));
      put(atail, i - k - 1, 0, at(A, i, c));
    }
    const Cplx d = dot_ordinary(col(vtail, 0), col(atail, 0));
    w = {w.re + d.re, w.im + d.im};
  }
  const Cplx s = zmul(t, w);
  put(A, k, c, {at(A, k, c).re - s.re, at(A, k, c).im - s.im});
  for (std::size_t i = k + 1; i < m; ++i) {
    const Cplx v = at(V, i, vc);
    const Cplx a = at(A, i, c);
    put(A, i, c, zfma({-s.re, -s.im}, v, a));
  }
}

}  // namespace

HouseholderQR householder_qr(const Matrix& A, bool pivot) {
  const std::size_t m = A.rows, n = A.cols;
  if (m < n) throw Error(ErrorKind::Usage, "QR needs rows >= cols");
  HouseholderQR qr;
  qr.packed = A;
  Matrix& R = qr.packed;
  qr.perm.resize(n);
  std::vector<double> orig(n);
  for (std::size_t j = 0; j < n; ++j) {
    qr.perm[j] = j;
    orig[j] = std::sqrt(norm_sq(col(A, j), false));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (pivot) {
      std::size_t best = k;
      double bn = -1.0;
      for (std::size_t c = k; c < n; ++c) {
        const double v = norm_sq(tail(R, c, k), false);
        if (v > bn) {
          bn = v;
          best = c;
        }
      }
      if (best != k) {
        swap_columns(R, k, best);
        std::swap(qr.perm[k], qr.perm[best]);
        std::swap(orig[k], orig[best]);
      }
    }
    const Cplx alpha = at(R, k, k);
    const double xnorm = k + 1 < m ? std::sqrt(norm_sq(tail(R, k, k + 1), false)) : 0.0;
    Cplx tau{0, 0};
    double beta = alpha.re;
    if (xnorm != 0.0 || alpha.im != 0.0) {
      beta = -std::copysign(std::hypot(abs(alpha), xnorm), alpha.re);
      tau = {(beta - alpha.re) / beta, -alpha.im / beta};
      const Cplx inv = cdiv({1, 0}, {alpha.re - beta, alpha.im});
      for (std::size_t i = k + 1; i < m; ++i) put(R, i, k, zmul(at(R, i, k), inv));
    }
    put(R, k, k, {beta, 0});
    // H^H = I - conj(tau) v v^H applied to the trailing columns
    for (std::size_t c = k + 1; c < n; ++c) reflect(R, c, R, k, k, conj(tau));
    qr.tau.push_back(tau);
    qr.sign.push_back(beta < 0 ? -1.0 : 1.0);
    if (!(std::fabs(beta) >= static_cast<double>(n) * kEps * orig[k]) || orig[k] == 0.0)
      throw Error(ErrorKind::Rank, "numerically rank-deficient column in QR");
  }
  return qr;
}

Matrix r_factor(const HouseholderQR& qr) {
  const std::size_t n = qr.packed.cols;
  Matrix R(n, n, qr.packed.field());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const Cplx v = at(qr.packed, i, j);
      put(R, i, j, scale(v, qr.sign[i]));
    }
  return R;
}

Matrix thin_q(const HouseholderQR& qr) {
  const std::size_t m = qr.packed.rows, n = qr.packed.cols;
  Matrix Q(m, n, qr.packed.field());
  for (std::size_t j = 0; j < n; ++j) Q.r(j, j) = 1.0;
  for (std::size_t k = n; k-- > 0;)
    for (std::size_t c = 0; c < n; ++c) reflect(Q, c, qr.packed, k, k, qr.tau[k]);
  for (std::size_t j = 0; j < n; ++j)
    if (qr.sign[j] < 0) {
      for (double& v : Q.re_col(j)) v = -v;
      for (double& v : Q.im_col(j)) v = -v;
    }
  return Q;
}

}  // namespace hzg
