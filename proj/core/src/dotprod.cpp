#include "hzgsvd/dotprod.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace hzg {

void require_fused_fma() {
  static const bool ok = [] {
    volatile double a = 134217729.0;  // 2^27 + 1
    volatile double c = 18014398777917440.0;  // 2^54 + 2^28
    return std::fma(a, a, -c) == 1.0;
  }();
  if (!ok) {
    std::fputs("hzgsvd: std::fma is not fused on this platform\n", stderr);
    std::abort();
  }
}

namespace {

std::size_t pow2_at_least(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Scratch planes reused per thread; index k is one product stream.
std::vector<double>& scratch(int k) {
  thread_local std::array<std::vector<double>, 6> bufs;
  return bufs[static_cast<std::size_t>(k)];
}

std::vector<double>& padded(int k, std::size_t n) {
  auto& b = scratch(k);
  const std::size_t p = pow2_at_least(n);
  if (b.size() < p) b.resize(p);
  std::fill(b.begin() + static_cast<std::ptrdiff_t>(n), b.begin() + static_cast<std::ptrdiff_t>(p),
            0.0);
  return b;
}

double reduce_in_place(double* v, std::size_t n) {
  for (std::size_t len = pow2_at_least(n); len > 1; len >>= 1)
    for (std::size_t i = 0; i < len / 2; ++i) v[i] = v[2 * i] + v[2 * i + 1];
  return v[0];
}

TrackedSum reduce_tracked_in_place(double* v, double* e, std::size_t n) {
  const std::size_t p = pow2_at_least(n);
  std::fill(e, e + p, 0.0);
  for (std::size_t len = p; len > 1; len >>= 1)
    for (std::size_t i = 0; i < len / 2; ++i) {
      const double a = v[2 * i], b = v[2 * i + 1];
      const double s = a + b;
      const double bb = s - a;
      const double node = (a - (s - bb)) + (b - bb);
      v[i] = s;
      e[i] = (e[2 * i] + e[2 * i + 1]) + node;
    }
  return {v[0], e[0]};
}

void check_lengths(ColView a, ColView b) {
  if (a.re.size() != b.re.size()) throw Error(ErrorKind::Usage, "dot: length mismatch");
  if (a.im.empty() != b.im.empty()) throw Error(ErrorKind::Usage, "dot: field mismatch");
}

// Two product streams x_t*y_t and sgn*u_t*w_t folded into one accumulator.
CompensatedAccumulator two_streams(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> u, std::span<const double> w,
                                   double sgn) {
  const std::size_t n = x.size();
  auto& c1 = padded(0, n);
  auto& d1 = padded(1, n);
  auto& c2 = padded(2, n);
  auto& d2 = padded(3, n);
  auto& e = padded(4, n);
  for (std::size_t t = 0; t < n; ++t) {
    const double p = x[t] * y[t];
    c1[t] = p;
    d1[t] = std::fma(x[t], y[t], -p);
    const double q = sgn * (u[t] * w[t]);
    c2[t] = q;
    d2[t] = sgn * std::fma(u[t], w[t], -(sgn * q));
  }
  CompensatedAccumulator acc;
  auto s1 = reduce_tracked_in_place(c1.data(), e.data(), n);
  acc.c_r = s1.sum;
  acc.d_r = reduce_in_place(d1.data(), n) + s1.err;
  auto s2 = reduce_tracked_in_place(c2.data(), e.data(), n);
  acc.c_i = s2.sum;
  acc.d_i = reduce_in_place(d2.data(), n) + s2.err;
  return acc;
}

CompensatedAccumulator one_stream(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  auto& c = padded(0, n);
  auto& d = padded(1, n);
  auto& e = padded(4, n);
  for (std::size_t t = 0; t < n; ++t) {
    const double p = x[t] * y[t];
    c[t] = p;
    d[t] = std::fma(x[t], y[t], -p);
  }
  CompensatedAccumulator acc;
  auto s = reduce_tracked_in_place(c.data(), e.data(), n);
  acc.c_r = s.sum;
  acc.d_r = reduce_in_place(d.data(), n) + s.err;
  return acc;
}

}  // namespace

double tree_reduce(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::Usage, "tree_reduce: empty input");
  auto& b = padded(5, values.size());
  std::copy(values.begin(), values.end(), b.begin());
  return reduce_in_place(b.data(), values.size());
}

TrackedSum tree_reduce_tracked(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::Usage, "tree_reduce: empty input");
  auto& b = padded(5, values.size());
  auto& e = padded(4, values.size());
  std::copy(values.begin(), values.end(), b.begin());
  return reduce_tracked_in_place(b.data(), e.data(), values.size());
}

double CompensatedAccumulator::combine() const {
  const double e = d_r + d_i;
  return (e + std::min(c_r, c_i)) + std::max(c_r, c_i);
}

Cplx dot_ordinary(ColView a, ColView b, bool conjugate_first) {
  check_lengths(a, b);
  const std::size_t n = a.re.size();
  if (n == 0) throw Error(ErrorKind::Usage, "dot: empty input");
  if (a.im.empty()) {
    auto& p = padded(0, n);
    for (std::size_t t = 0; t < n; ++t) p[t] = a.re[t] * b.re[t];
    return {reduce_in_place(p.data(), n), 0.0};
  }
  auto& pr = padded(0, n);
  auto& pi = padded(1, n);
  for (std::size_t t = 0; t < n; ++t) {
    const Cplx x{a.re[t], a.im[t]}, y{b.re[t], b.im[t]};
    const Cplx z = conjugate_first ? zmulc(x, y) : zmul(x, y);
    pr[t] = z.re;
    pi[t] = z.im;
  }
  return {reduce_in_place(pr.data(), n), reduce_in_place(pi.data(), n)};
}

CompensatedDot dot_compensated(ColView a, ColView b, bool conjugate_first) {
  check_lengths(a, b);
  if (a.re.empty()) throw Error(ErrorKind::Usage, "dot: empty input");
  CompensatedDot out;
  if (a.im.empty()) {
    out.re = one_stream(a.re, b.re);
    return out;
  }
  // conj(a)b: re = ar*br + ai*bi, im = ar*bi - ai*br
  // a b:      re = ar*br - ai*bi, im = ar*bi + ai*br
  const double s = conjugate_first ? 1.0 : -1.0;
  out.re = two_streams(a.re, b.re, a.im, b.im, s);
  out.im = two_streams(a.re, b.im, a.im, b.re, -s);
  return out;
}

CompensatedAccumulator norm_sq_compensated(ColView v) {
  if (v.re.empty()) throw Error(ErrorKind::Usage, "norm: empty input");
  if (v.im.empty()) return one_stream(v.re, v.re);
  return two_streams(v.re, v.re, v.im, v.im, 1.0);
}

double norm_sq(ColView v, bool compensated) {
  if (compensated) return norm_sq_compensated(v).combine();
  const std::size_t n = v.re.size();
  if (n == 0) throw Error(ErrorKind::Usage, "norm: empty input");
  auto& p = padded(0, n);
  if (v.im.empty()) {
    for (std::size_t t = 0; t < n; ++t) p[t] = v.re[t] * v.re[t];
  } else {
    for (std::size_t t = 0; t < n; ++t) p[t] = std::fma(v.re[t], v.re[t], v.im[t] * v.im[t]);
  }
  return reduce_in_place(p.data(), n);
}

}  // namespace hzg
