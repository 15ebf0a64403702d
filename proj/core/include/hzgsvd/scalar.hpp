// Complex scalars as plain (re, im) pairs with the fused multiply forms used
// everywhere in the solver. Avoids std::complex so that every rounding is
// spelled out.
#pragma once

#include <cmath>

namespace hzg {

struct Cplx {
  double re = 0.0;
  double im = 0.0;
  bool operator==(const Cplx&) const = default;
};

// a*b: one product and one FMA per component.
inline Cplx zmul(Cplx a, Cplx b) {
  return {std::fma(a.re, b.re, -(a.im * b.im)), std::fma(a.re, b.im, a.im * b.re)};
}

// conj(a)*b
inline Cplx zmulc(Cplx a, Cplx b) {
  return {std::fma(a.re, b.re, a.im * b.im), std::fma(a.re, b.im, -(a.im * b.re))};
}

// a*b + c with two FMAs per component.
inline Cplx zfma(Cplx a, Cplx b, Cplx c) {
  const double dr = std::fma(-a.im, b.im, c.re);
  const double di = std::fma(a.im, b.re, c.im);
  return {std::fma(a.re, b.re, dr), std::fma(a.re, b.im, di)};
}

inline Cplx conj(Cplx a) { return {a.re, -a.im}; }
inline Cplx scale(Cplx a, double s) { return {a.re * s, a.im * s}; }
inline double abs(Cplx a) { return std::hypot(a.re, a.im); }

// Fortran SIGN(1, x), honoring the sign bit of zero.
inline double sign1(double x) { return std::signbit(x) ? -1.0 : 1.0; }

inline double rsqrt(double x) { return 1.0 / std::sqrt(x); }

}  // namespace hzg
