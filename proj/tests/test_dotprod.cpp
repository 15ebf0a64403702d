// Dot products, norms and the reduction tree, checked against exact oracles.
#include <gmpxx.h>

#include <tuple>

#include "doctest.h"
#include "hzgsvd/dotprod.hpp"
#include "hzgsvd/task_pool.hpp"
#include "support.hpp"

using namespace hzg;

namespace {

ColView rv(const std::vector<double>& v) { return {v, {}}; }
ColView cv(const std::vector<double>& re, const std::vector<double>& im) { return {re, im}; }

mpq_class q(double x) { return mpq_class(x); }

// |got - exact| <= 1 ulp of got (exact rational comparison).
bool within_one_ulp(double got, const mpq_class& exact) {
  const double up = std::nextafter(got, INFINITY), dn = std::nextafter(got, -INFINITY);
  const mpq_class lo = q(got) - (q(got) - q(dn)), hi = q(got) + (q(up) - q(got));
  return exact >= lo && exact <= hi;
}

using i128 = __int128;

}  // namespace

TEST_SUITE("dotprod") {

TEST_CASE("fused multiply-add is available") { require_fused_fma(); }

TEST_CASE("ordinary dot examples") {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(dot_ordinary(rv(a), rv(b)).re == 32.0);

  const std::vector<double> zr{3}, zi{4};
  const Cplx s = dot_ordinary(cv(zr, zi), cv(zr, zi));
  CHECK(s.re == 25.0);
  CHECK(s.im == 0.0);

  // a = [1+i, 1-i], b = [1, i]: (1-i)*1 + (1+i)*i = 0
  const std::vector<double> ar{1, 1}, ai{1, -1}, br{1, 0}, bi{0, 1};
  const Cplx z = dot_ordinary(cv(ar, ai), cv(br, bi));
  CHECK(z.re == 0.0);
  CHECK(z.im == 0.0);
  // rational cross-check of the same sum
  const mpq_class re = q(1) * q(1) + q(1) * q(0) + q(1) * q(0) + q(-1) * q(1);
  CHECK(re == 0);
}

TEST_CASE("length and field mismatches are rejected") {
  const std::vector<double> a{1, 2}, b{1};
  CHECK_THROWS_AS(dot_ordinary(rv(a), rv(b)), Error);
  CHECK_THROWS_AS(dot_compensated(rv(a), rv(b)), Error);
  const std::vector<double> im{0, 0};
  CHECK_THROWS_AS(dot_ordinary(rv(a), cv(a, im)), Error);
}

TEST_CASE("2^27+1 squared: compensated pair is exact, ordinary loses the 1") {
  const double x = 134217729.0;  // 2^27 + 1
  const std::vector<double> a{x};
  const i128 exact = (i128(1) << 54) + (i128(1) << 28) + 1;

  const double ord = dot_ordinary(rv(a), rv(a)).re;
  CHECK(ord == 18014398777917440.0);  // 2^54 + 2^28
  CHECK(static_cast<i128>(ord) == exact - 1);

  // The exact value needs 55 bits, so it is checked on the exposed pair.
  const CompensatedDot c = dot_compensated(rv(a), rv(a));
  CHECK(static_cast<i128>(c.re.c_r) + static_cast<i128>(c.re.d_r) == exact);
  CHECK(c.re.d_r == 1.0);

  const CompensatedAccumulator n = norm_sq_compensated(rv(a));
  CHECK(static_cast<i128>(n.c_r) + static_cast<i128>(n.d_r) == exact);

  // Complex with zero imaginary parts: same exact pair.
  const std::vector<double> z{0.0};
  const CompensatedDot cc = dot_compensated(cv(a, z), cv(a, z));
  const i128 sum = static_cast<i128>(cc.re.c_r) + static_cast<i128>(cc.re.c_i) +
                   static_cast<i128>(cc.re.d_r) + static_cast<i128>(cc.re.d_i);
  CHECK(sum == exact);
  CHECK(cc.im.c_r + cc.im.c_i + cc.im.d_r + cc.im.d_i == 0.0);
}

TEST_CASE("norm_sq examples") {
  const std::vector<double> a{3, 4};
  CHECK(norm_sq(rv(a), false) == 25.0);
  CHECK(norm_sq(rv(a), true) == 25.0);
  const std::vector<double> zr{3}, zi{4};
  CHECK(norm_sq(cv(zr, zi), false) == 25.0);
  CHECK(norm_sq(cv(zr, zi), true) == 25.0);
}

TEST_CASE("tree_reduce examples") {
  std::vector<double> v(32);
  for (std::size_t i = 0; i < 32; ++i) v[i] = static_cast<double>(i + 1);
  CHECK(tree_reduce(v) == 528.0);
  CHECK(tree_reduce(std::vector<double>{0.1}) == 0.1);
  // (1e16 + 1) + (1 + 0): the first node rounds to 1e16 (tie to even),
  // the second to 1e16 + 1 which again ties to 1e16.
  const double got = tree_reduce(std::vector<double>{1e16, 1, 1, 0});
  const double a = 1e16 + 1.0;
  const double b = 1.0 + 0.0;
  CHECK(got == a + b);
  CHECK(got == 1e16);
  // odd length pads with +0.0
  CHECK(tree_reduce(std::vector<double>{1, 2, 3}) == (1.0 + 2.0) + (3.0 + 0.0));
}

TEST_CASE("tree_reduce is independent of the calling thread") {
  hzg::Rng rng(5);
  std::vector<double> v(1000);
  for (double& x : v) x = rng.uniform(-1, 1) * std::ldexp(1.0, static_cast<int>(rng.next() % 60) - 30);
  const double ref = tree_reduce(v);
  TaskPool pool(4);
  std::vector<double> got(16);
  pool.parallel_for(16, [&](std::size_t i) { got[i] = tree_reduce(v); });
  for (double g : got) CHECK(hzgtest::ulp_distance(g, ref) == 0);
}

TEST_CASE("exact products: compensated equals ordinary bitwise") {
  hzg::Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.next() % 64;
    std::vector<double> a(n), b(n), ai(n), bi(n);
    for (std::size_t t = 0; t < n; ++t) {
      a[t] = static_cast<double>(static_cast<int>(rng.next() % 2001) - 1000);
      b[t] = static_cast<double>(static_cast<int>(rng.next() % 2001) - 1000);
      ai[t] = static_cast<double>(static_cast<int>(rng.next() % 2001) - 1000);
      bi[t] = static_cast<double>(static_cast<int>(rng.next() % 2001) - 1000);
    }
    CHECK(dot_compensated(rv(a), rv(b)).value().re == dot_ordinary(rv(a), rv(b)).re);
    const Cplx c = dot_compensated(cv(a, ai), cv(b, bi)).value();
    const Cplx o = dot_ordinary(cv(a, ai), cv(b, bi));
    CHECK(c.re == o.re);
    CHECK(c.im == o.im);
  }
}

TEST_CASE("compensated real dot within 1 ulp of the rational oracle") {
  hzg::Rng rng(2024);
  int bad = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng.next() % 64;
    std::vector<double> a(n), b(n);
    for (std::size_t t = 0; t < n; ++t) {
      a[t] = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.next() % 61) - 30);
      b[t] = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.next() % 61) - 30);
    }
    mpq_class exact = 0;
    for (std::size_t t = 0; t < n; ++t) exact += q(a[t]) * q(b[t]);
    const double got = dot_compensated(rv(a), rv(b)).value().re;
    bad += !within_one_ulp(got, exact);
  }
  CHECK(bad == 0);
}

TEST_CASE("compensated complex dot error bound") {
  // The two product streams of each component are merged by the cheap rule
  // (e + min) + max, which rounds at the scale of the smaller stream sum, so
  // under cancellation between streams 1 ulp is not reachable. The bound below
  // adds that term to the usual two-fold-precision bound.
  hzg::Rng rng(77);
  int bad = 0, beyond_ulp = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng.next() % 64;
    std::vector<double> ar(n), ai(n), br(n), bi(n);
    for (auto* v : {&ar, &ai, &br, &bi})
      for (double& x : *v) x = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.next() % 61) - 30);
    mpq_class er = 0, ei = 0;
    double abs_r = 0, abs_i = 0;
    for (std::size_t t = 0; t < n; ++t) {
      er += q(ar[t]) * q(br[t]) + q(ai[t]) * q(bi[t]);
      ei += q(ar[t]) * q(bi[t]) - q(ai[t]) * q(br[t]);
      abs_r += std::fabs(ar[t] * br[t]) + std::fabs(ai[t] * bi[t]);
      abs_i += std::fabs(ar[t] * bi[t]) + std::fabs(ai[t] * br[t]);
    }
    const CompensatedDot d = dot_compensated(cv(ar, ai), cv(br, bi));
    const Cplx got = d.value();
    const double u = 0x1p-53, gam = 2.0 * n * u / (1 - 2.0 * n * u);
    for (auto [g, ex, ab, acc] : {std::tuple{got.re, er, abs_r, d.re}, {got.im, ei, abs_i, d.im}}) {
      const double err = std::fabs(mpq_class(q(g) - ex).get_d());
      const double small = std::min(std::fabs(acc.c_r), std::fabs(acc.c_i));
      bad += err > 2 * u * std::fabs(ex.get_d()) + 4 * u * small + gam * gam * ab;
      beyond_ulp += !within_one_ulp(g, ex);
    }
  }
  CHECK(bad == 0);
  CHECK(beyond_ulp < 50);  // of 2000 components
}

TEST_CASE("compensated norms are nonnegative") {
  hzg::Rng rng(3);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t n = 1 + rng.next() % 32;
    std::vector<double> v(n);
    for (double& x : v) x = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.next() % 61) - 30);
    CHECK_UNARY(norm_sq(rv(v), true) >= 0.0);
  }
}

}  // TEST_SUITE
