#include "hzgsvd/kernel2x2.hpp"

#include <cmath>
#include <tuple>

#include "hzgsvd/dotprod.hpp"

namespace hzg {

PivotPair2x2 form_pivot(ColView fi, ColView fj, ColView gi, ColView gj, bool compensated,
                        bool unit_b) {
  PivotPair2x2 p;
  p.is_complex = !fi.im.empty();
  p.a11 = norm_sq(fi, compensated);
  p.a22 = norm_sq(fj, compensated);
  p.a12 = dot(fi, fj, compensated);
  if (!unit_b) {
    p.b11 = norm_sq(gi, compensated);
    p.b22 = norm_sq(gj, compensated);
  }
  p.b12 = dot(gi, gj, compensated);
  if (!(p.a11 > 0) || !(p.a22 > 0) || !(p.b11 > 0) || !(p.b22 > 0))
    throw Error(ErrorKind::Rank, "zero column in pivot pair");
  return p;
}

PivotPair2x2 rescale_pivot(PivotPair2x2 p) {
  if (p.b11 != 1.0) {
    p.d11 = rsqrt(p.b11);
    p.a11 /= p.b11;
    p.a12 = scale(p.a12, p.d11);
    p.b12 = scale(p.b12, p.d11);
    p.b11 = 1.0;
  }
  if (p.b22 != 1.0) {
    p.d22 = rsqrt(p.b22);
    p.a22 /= p.b22;
    p.a12 = scale(p.a12, p.d22);
    p.b12 = scale(p.b12, p.d22);
    p.b22 = 1.0;
  }
  return p;
}

bool relatively_orthogonal(const PivotPair2x2& p, std::size_t n, double eps) {
  const double tol = eps * std::sqrt(static_cast<double>(n));
  return abs(p.a12) < std::sqrt(p.a11) * std::sqrt(p.a22) * tol && abs(p.b12) < tol;
}

namespace {

constexpr double kRsqrt2 = 0.70710678118654752440;

// cos and sin from a tangent; an infinite tangent keeps its sign, since
// h = +0 is the limit of h > 0 and -inf then means -pi/2.
std::pair<double, double> cos_sin_from_tan(double tn) {
  if (std::isinf(tn)) return {0.0, std::copysign(1.0, tn)};
  const double c = 1.0 / std::hypot(1.0, tn);
  return {c, tn * c};
}

// Both branches; `s` is the unit phase of b12 (e^{i zeta}).
RawTransform exception_matrix(double x, Cplx s) {
  const double p = kRsqrt2 / std::sqrt(1.0 + x);
  const double m = kRsqrt2 / std::sqrt(1.0 - x);
  RawTransform r;
  r.z11 = {p, 0};
  r.z12 = scale(s, -m);
  r.z21 = scale(conj(s), p);
  r.z22 = {m, 0};
  r.exception = true;
  r.cos_phi = r.cos_psi = 0.0;
  return r;
}

}  // namespace

std::pair<RawTransform, TransformScalars> transform_real(const PivotPair2x2& p) {
  TransformScalars sc;
  const double a11 = p.a11, a22 = p.a22, a12 = p.a12.re;
  const double x = p.b12.re;
  sc.x = x;
  sc.t = std::sqrt((1.0 - x) * (1.0 + x));
  const double sp = std::sqrt(1.0 + x), sm = std::sqrt(1.0 - x);
  sc.xi = x / (sp + sm);
  sc.eta = x / ((1.0 + sp) * (1.0 + sm));
  const double num = sc.t * (a22 - a11);
  const double den = std::fma(-(a11 + a22), x, 2.0 * a12);
  if (num == 0.0 && den == 0.0) {
    sc.exception = true;
    sc.tan2theta = std::nan("");
    return {exception_matrix(std::fabs(x), {sign1(x), 0.0}), sc};
  }
  const double cot = num / den;
  sc.tan2theta = cot;
  const double tn = sign1(cot) / (std::fabs(cot) + std::hypot(1.0, cot));
  const double c = 1.0 / std::hypot(1.0, tn);
  const double s = tn * c;
  const double xi = sc.xi, eta = sc.eta;
  const double cphi = c + xi * (s - eta * c);
  const double cpsi = c - xi * (s + eta * c);
  const double sphi = s - xi * (c + eta * s);
  const double spsi = s + xi * (c - eta * s);
  RawTransform r;
  r.cos_phi = cphi;
  r.cos_psi = cpsi;
  r.z11 = {cphi / sc.t, 0};
  r.z12 = {sphi / sc.t, 0};
  r.z21 = {-spsi / sc.t, 0};
  r.z22 = {cpsi / sc.t, 0};
  return {r, sc};
}

std::pair<RawTransform, TransformScalars> transform_complex(const PivotPair2x2& p) {
  TransformScalars sc;
  const double a11 = p.a11, a22 = p.a22;
  const double x = abs(p.b12);
  sc.x = x;
  Cplx phase{1.0, 0.0};  // e^{i zeta}
  if (x != 0.0) {
    phase = {p.b12.re / x, p.b12.im / x};
    sc.zeta = std::atan2(p.b12.im, p.b12.re);
  }
  const Cplx z = zmulc(phase, p.a12);
  sc.u = z.re;
  sc.v = z.im;
  sc.h = a22 - a11;
  sc.tau = sign1(sc.h);
  sc.t = std::sqrt((1.0 - x) * (1.0 + x));
  if (sc.v == 0.0 && sc.h == 0.0) {
    sc.exception = true;
    return {exception_matrix(x, phase), sc};
  }
  sc.tan2theta = sc.tau * std::fma(-(a11 + a22), x, 2.0 * sc.u) / (sc.t * std::hypot(sc.h, 2.0 * sc.v));
  sc.tangamma = 2.0 * sc.v / sc.h;
  const auto [c2t, s2t] = cos_sin_from_tan(sc.tan2theta);
  const auto [cg, sg] = cos_sin_from_tan(sc.tangamma);
  const double tcc = sc.t * cg * c2t;
  const double tsc = sc.t * sg * c2t;
  const double cphi = std::sqrt(1.0 + x * s2t + tcc) * kRsqrt2;
  const double cpsi = std::sqrt(1.0 - x * s2t + tcc) * kRsqrt2;
  // e^{i alpha} sin(phi) and e^{-i beta} sin(psi)
  const Cplx ea = scale(zmul(phase, {s2t - x, tsc}), 0.5 / cpsi);
  const Cplx eb = scale(zmul(conj(phase), {s2t + x, -tsc}), 0.5 / cphi);
  RawTransform r;
  r.cos_phi = cphi;
  r.cos_psi = cpsi;
  const double it = 1.0 / sc.t;
  r.z11 = {cphi * it, 0};
  r.z12 = scale(ea, it);
  r.z21 = scale(eb, -it);
  r.z22 = {cpsi * it, 0};
  return {r, sc};
}

std::pair<double, double> transformed_diagonal(Cplx z11, Cplx z12, Cplx z21, Cplx z22,
                                               const PivotPair2x2& p) {
  auto form = [&](Cplx a, Cplx b) {
    const double aa = std::fma(a.re, a.re, a.im * a.im);
    const double bb = std::fma(b.re, b.re, b.im * b.im);
    const double cross = zmul(zmulc(a, p.a12), b).re;
    return std::fma(aa, p.a11, std::fma(2.0, cross, bb * p.a22));
  };
  return {form(z11, z21), form(z12, z22)};
}

Transform2x2 finalize_transform(const std::optional<RawTransform>& zp, const PivotPair2x2& p,
                                bool sort, Criterion criterion) {
  Transform2x2 out;
  if (!zp) {
    out.a11pp = p.a11;
    out.a22pp = p.a22;
    if (sort && p.a11 < p.a22) {
      out.z11 = out.z22 = {0, 0};
      out.z12 = out.z21 = {1, 0};
      out.swapped = true;
      std::swap(out.a11pp, out.a22pp);
    }
    return out;
  }
  const RawTransform& r = *zp;
  out.applied = true;
  if (r.exception) {
    out.is_big = true;
  } else if (criterion == Criterion::C1) {
    out.is_big = !(r.z11.re == 1.0 && r.z22.re == 1.0);
  } else {
    out.is_big = !(r.cos_phi == 1.0 && r.cos_psi == 1.0);
  }
  std::tie(out.a11pp, out.a22pp) = transformed_diagonal(r.z11, r.z12, r.z21, r.z22, p);
  out.z11 = r.z11;
  out.z12 = r.z12;
  out.z21 = r.z21;
  out.z22 = r.z22;
  if (p.d11 != 1.0) {
    out.z11 = scale(out.z11, p.d11);
    out.z12 = scale(out.z12, p.d11);
  }
  if (p.d22 != 1.0) {
    out.z21 = scale(out.z21, p.d22);
    out.z22 = scale(out.z22, p.d22);
  }
  if (sort && out.a11pp < out.a22pp) {
    std::swap(out.z11, out.z12);
    std::swap(out.z21, out.z22);
    std::swap(out.a11pp, out.a22pp);
    out.swapped = true;
  }
  return out;
}

}  // namespace hzg
