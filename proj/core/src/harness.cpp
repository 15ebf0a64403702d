#include "hzgsvd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "hzgsvd/blocked.hpp"
#include "hzgsvd/dotprod.hpp"

namespace hzg {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }

double Rng::normal() {
  // Box-Muller, one value per call
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split(std::uint64_t stream) const { return Rng(mix64(state_ ^ mix64(stream + 1))); }

Matrix random_orthogonal(std::size_t n, std::uint64_t seed, Field field) {
  if (n < 1) throw Error(ErrorKind::Usage, "random_orthogonal: n must be >= 1");
  const bool cx = field == Field::Complex;
  Rng rng(seed);
  Matrix q = Matrix::identity(n, field);
  std::vector<Cplx> v(n);
  for (std::size_t k = n - 1; k-- > 0;) {
    const std::size_t len = n - k;
    double vv = 0;
    for (std::size_t t = 0; t < len; ++t) {
      v[t] = {rng.normal(), cx ? rng.normal() : 0.0};
      vv += v[t].re * v[t].re + v[t].im * v[t].im;
    }
    const double f = 2.0 / vv;
    for (std::size_t c = 0; c < n; ++c) {
      Cplx w;
      for (std::size_t t = 0; t < len; ++t) w = zfma(conj(v[t]), {q.r(k + t, c), q.im_at(k + t, c)}, w);
      w = scale(w, f);
      for (std::size_t t = 0; t < len; ++t) {
        const Cplx u = zmul(w, v[t]);
        q.r(k + t, c) -= u.re;
        if (cx) q.i(k + t, c) -= u.im;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    Cplx d;
    if (cx) {
      const double th = 2.0 * std::numbers::pi * rng.uniform();
      d = {std::cos(th), std::sin(th)};
    } else {
      d = {(rng.next() & 1) ? -1.0 : 1.0, 0.0};
    }
    for (std::size_t c = 0; c < n; ++c) {
      const Cplx x = zmul(d, {q.r(i, c), q.im_at(i, c)});
      q.r(i, c) = x.re;
      if (cx) q.i(i, c) = x.im;
    }
  }
  return q;
}

Matrix matmul_compensated(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw Error(ErrorKind::Usage, "matmul: shape mismatch");
  const bool cx = a.is_complex || b.is_complex;
  const Matrix at = conj_transpose(a);
  Matrix bb = b;
  if (cx && !bb.is_complex) {
    Matrix t(b.rows, b.cols, Field::Complex);
    t.re = b.re;
    bb = std::move(t);
  }
  Matrix aa = at;
  if (cx && !aa.is_complex) {
    Matrix t(at.rows, at.cols, Field::Complex);
    t.re = at.re;
    aa = std::move(t);
  }
  Matrix c(a.rows, b.cols, cx ? Field::Complex : Field::Real);
  for (std::size_t j = 0; j < b.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i) {
      const Cplx v = dot_compensated(col(aa, i), col(bb, j)).value();
      c.r(i, j) = v.re;
      if (cx) c.i(i, j) = v.im;
    }
  return c;
}

namespace {

// Scales row i of m by d[i].
void scale_rows(Matrix& m, const std::vector<double>& d) {
  for (std::size_t c = 0; c < m.cols; ++c)
    for (std::size_t i = 0; i < m.rows; ++i) {
      m.r(i, c) *= d[i];
      if (m.is_complex) m.i(i, c) *= d[i];
    }
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

double frob(const Matrix& m) {
  std::vector<double> parts(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) parts[j] = norm_sq_compensated(col(m, j)).combine();
  return std::sqrt(tree_reduce(parts));
}

}  // namespace

GenSpec random_gen_spec(std::size_t n, std::uint64_t seed, Field field, double lo, double hi) {
  GenSpec s;
  s.n = n;
  s.seed = seed;
  s.field = field;
  Rng rng(mix64(seed ^ 0x5eed));
  s.sigmaF.resize(n);
  s.sigmaG.resize(n);
  s.lambdaX.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.sigmaF[i] = rng.uniform(lo, hi);
    s.sigmaG[i] = rng.uniform(lo, hi);
    s.lambdaX[i] = rng.uniform(lo, hi);
  }
  return s;
}

GeneratedPair gen_pair(const GenSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 1 || spec.sigmaF.size() != n || spec.sigmaG.size() != n || spec.lambdaX.size() != n)
    throw Error(ErrorKind::Usage, "gen_pair: inconsistent spec");
  for (std::size_t i = 0; i < n; ++i)
    if (!(spec.sigmaF[i] > 0 && spec.sigmaG[i] > 0 && spec.lambdaX[i] > 0))
      throw Error(ErrorKind::Usage, "gen_pair: prescribed values must be positive");

  Matrix x;
  Matrix f, g;
  if (spec.identity_factors) {
    f = Matrix(n, n, spec.field);
    g = Matrix(n, n, spec.field);
    for (std::size_t i = 0; i < n; ++i) {
      f.r(i, i) = spec.sigmaF[i];
      g.r(i, i) = spec.sigmaG[i];
    }
  } else {
    const Matrix w = random_orthogonal(n, mix64(spec.seed * 3 + 1), spec.field);
    const Matrix u = random_orthogonal(n, mix64(spec.seed * 3 + 2), spec.field);
    const Matrix v = random_orthogonal(n, mix64(spec.seed * 3 + 3), spec.field);
    Matrix wl = w;
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        wl.r(i, c) *= spec.lambdaX[c];
        if (wl.is_complex) wl.i(i, c) *= spec.lambdaX[c];
      }
    x = matmul_compensated(wl, conj_transpose(w));
    Matrix sx = x, gx = x;
    scale_rows(sx, spec.sigmaF);
    scale_rows(gx, spec.sigmaG);
    f = matmul_compensated(u, sx);
    g = matmul_compensated(v, gx);
  }
  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = spec.sigmaF[i] / spec.sigmaG[i];
  return {ProblemPair::make(std::move(f), std::move(g)), sorted_desc(std::move(sigma))};
}

ConditionPair gen_condition_pair(std::size_t n, int j, std::uint64_t seed, Field field) {
  if (n < 2 || j < 0) throw Error(ErrorKind::Usage, "gen_condition_pair: need n >= 2, j >= 0");
  std::vector<double> la(n), lb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    la[i] = std::sqrt(std::pow(10.0, -t));
    lb[i] = std::sqrt(std::pow(10.0, -t * j));
  }
  // F = diag(sqrt(lambda)) Q^H, so F^H F = Q diag(lambda) Q^H
  Matrix f = conj_transpose(random_orthogonal(n, mix64(seed * 2 + 11), field));
  Matrix g = conj_transpose(random_orthogonal(n, mix64(seed * 2 + 12), field));
  scale_rows(f, la);
  scale_rows(g, lb);
  ConditionPair out;
  out.A = matmul_compensated(conj_transpose(f), f);
  out.B = matmul_compensated(conj_transpose(g), g);
  out.pair = ProblemPair::make(std::move(f), std::move(g));
  return out;
}

ProblemPair ill_scaled_pair(double g11) {
  Matrix f(4, 4, Field::Real);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i <= j; ++i) f.r(i, j) = 1.0;
  Matrix g = f;
  g.r(0, 0) = g11;
  return ProblemPair::make(std::move(f), std::move(g));
}

Matrix inverse(const Matrix& z) {
  using C = std::complex<long double>;
  const std::size_t n = z.rows;
  if (z.cols != n) throw Error(ErrorKind::Usage, "inverse: matrix not square");
  std::vector<C> a(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a[i * n + j] = C(z.r(i, j), z.i(i, j));
  std::vector<std::size_t> rp(n), cp(n);
  for (std::size_t k = 0; k < n; ++k) {
    long double best = -1;
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (std::abs(a[i * n + j]) > best) {
          best = std::abs(a[i * n + j]);
          bi = i;
          bj = j;
        }
    if (best == 0) throw Error(ErrorKind::Singular, "inverse: matrix is singular");
    rp[k] = bi;
    cp[k] = bj;
    for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[bi * n + j]);
    for (std::size_t i = 0; i < n; ++i) std::swap(a[i * n + k], a[i * n + bj]);
    for (std::size_t i = k + 1; i < n; ++i) {
      a[i * n + k] /= a[k * n + k];
      const C l = a[i * n + k];
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= l * a[k * n + j];
    }
  }
  // P A Q = L U  =>  A^{-1} = Q U^{-1} L^{-1} P
  Matrix out(n, n, z.field());
  std::vector<C> x(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(x.begin(), x.end(), C(0));
    x[c] = 1;
    for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[rp[k]]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < i; ++k) x[i] -= a[i * n + k] * x[k];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t k = i + 1; k < n; ++k) x[i] -= a[i * n + k] * x[k];
      x[i] /= a[i * n + i];
    }
    for (std::size_t k = n; k-- > 0;) std::swap(x[k], x[cp[k]]);
    for (std::size_t i = 0; i < n; ++i) {
      out.r(i, c) = static_cast<double>(x[i].real());
      if (out.is_complex) out.i(i, c) = static_cast<double>(x[i].imag());
    }
  }
  return out;
}

std::pair<double, double> relative_errors(std::vector<double> got, std::vector<double> ref) {
  if (got.size() != ref.size()) throw Error(ErrorKind::Usage, "relative_errors: size mismatch");
  for (double v : got)
    if (std::isnan(v)) return {std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN()};
  got = sorted_desc(std::move(got));
  ref = sorted_desc(std::move(ref));
  double mx = 0, sum = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double e = std::abs(got[i] - ref[i]) / std::abs(ref[i]);
    mx = std::max(mx, e);
    sum += e;
  }
  return {mx, got.empty() ? 0.0 : sum / static_cast<double>(got.size())};
}

namespace {

double residual(const Matrix& y, const Matrix& w, const std::vector<double>& s, const Matrix& x) {
  Matrix ws = w;
  for (std::size_t c = 0; c < ws.cols; ++c)
    for (std::size_t i = 0; i < ws.rows; ++i) {
      ws.r(i, c) *= s[c];
      if (ws.is_complex) ws.i(i, c) *= s[c];
    }
  Matrix d = matmul_compensated(ws, x);
  for (std::size_t k = 0; k < d.re.size(); ++k) {
    d.re[k] = y.re[k] - d.re[k];
    if (d.is_complex) d.im[k] = y.im[k] - d.im[k];
  }
  return frob(d) / frob(y);
}

double orth_defect(const Matrix& w) {
  Matrix g(w.cols, w.cols, w.field());
  for (std::size_t j = 0; j < w.cols; ++j)
    for (std::size_t i = 0; i < w.cols; ++i) {
      const Cplx v = dot_compensated(col(w, i), col(w, j)).value();
      g.r(i, j) = v.re - (i == j ? 1.0 : 0.0);
      if (g.is_complex) g.i(i, j) = v.im;
    }
  return frob(g);
}

}  // namespace

AccuracyReport accuracy_report(const ProblemPair& p, const GsvdResult& r,
                               const std::optional<std::vector<double>>& reference) {
  const Matrix x = inverse(r.Z);
  AccuracyReport a;
  a.resF = residual(p.F, r.U, r.sigmaF, x);
  a.resG = residual(p.G, r.V, r.sigmaG, x);
  a.orthU = orth_defect(r.U);
  a.orthV = orth_defect(r.V);
  if (reference) {
    a.has_reference = true;
    std::tie(a.max_rel_sigma, a.avg_rel_sigma) = relative_errors(r.sigma, *reference);
  }
  return a;
}

std::vector<double> jacobi_eigenvalues(const Matrix& M, std::size_t max_sweeps) {
  using C = std::complex<double>;
  const std::size_t n = M.rows;
  std::vector<C> a(n * n);
  auto at = [&](std::size_t i, std::size_t j) -> C& { return a[i + j * n]; };
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) at(i, j) = C(M.r(i, j), M.i(i, j));
  for (std::size_t i = 0; i < n; ++i) at(i, i) = at(i, i).real();

  // Textbook cyclic-by-row sweeps, stopping once off(C) <= eps * ||C||_F.
  auto off_and_norm = [&] {
    double off = 0, all = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const double m2 = std::norm(at(i, j));
        all += m2;
        if (i != j) off += m2;
      }
    return std::pair{std::sqrt(off), std::sqrt(all)};
  };
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    const auto [off, nrm] = off_and_norm();
    if (off <= kEps * nrm) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const C apq = at(p, q);
        const double mag = std::abs(apq);
        if (mag == 0) continue;
        const double app = at(p, p).real(), aqq = at(q, q).real();
        const double theta = (aqq - app) / (2 * mag);
        const double t = std::abs(theta) > 1e150
                             ? 1 / (2 * theta)
                             : std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1 / std::sqrt(1 + t * t), s = t * c;
        const C e = apq / mag;  // phase of the pivot
        const C eb = std::conj(e);
        for (std::size_t i = 0; i < n; ++i) {
          const C xp = at(i, p), xq = at(i, q);
          at(i, p) = c * xp - s * eb * xq;
          at(i, q) = s * xp + c * eb * xq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const C xp = at(p, j), xq = at(q, j);
          at(p, j) = c * xp - s * e * xq;
          at(q, j) = s * xp + c * e * xq;
        }
        at(p, q) = at(q, p) = 0;
        at(p, p) = at(p, p).real();
        at(q, q) = at(q, q).real();
      }
  }
  std::vector<double> lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = at(i, i).real();
  return sorted_desc(std::move(lambda));
}

GevdResult gevd_route(const Matrix& A, const Matrix& B) {
  GevdResult out;
  Matrix R;
  try {
    R = cholesky_upper(B);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
    out.cholesky_failed = true;
    return out;
  }
  const std::size_t n = A.rows;
  // Solves R^H Y = M column by column.
  auto lower_solve = [&](const Matrix& m) {
    Matrix y = m;
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        Cplx acc{y.r(i, c), y.im_at(i, c)};
        for (std::size_t k = 0; k < i; ++k) {
          const Cplx rk = conj(Cplx{R.r(k, i), R.im_at(k, i)});
          const Cplx yk{y.r(k, c), y.im_at(k, c)};
          const Cplx pr = zmul(rk, yk);
          acc = {acc.re - pr.re, acc.im - pr.im};
        }
        const double d = R.r(i, i);
        y.r(i, c) = acc.re / d;
        if (y.is_complex) y.i(i, c) = acc.im / d;
      }
    return y;
  };
  const Matrix y = lower_solve(A);
  Matrix c = conj_transpose(lower_solve(conj_transpose(y)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const double re = 0.5 * (c.r(i, j) + c.r(j, i));
      c.r(i, j) = c.r(j, i) = re;
      if (c.is_complex) {
        const double im = 0.5 * (c.i(i, j) - c.i(j, i));
        c.i(i, j) = im;
        c.i(j, i) = -im;
      }
    }
  out.lambda = jacobi_eigenvalues(c);
  return out;
}

std::vector<PitfallRow> pitfall_report(std::size_t n, const std::vector<int>& exponents,
                                       std::uint64_t seed) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SolverConfig plain;
  SolverConfig tight;
  tight.variant_id = 1;
  tight.gate_eps = kEps / 4;
  std::vector<PitfallRow> rows;
  for (int j : exponents) {
    const ConditionPair cp = gen_condition_pair(n, j, seed + static_cast<std::uint64_t>(j));
    PitfallRow row;
    row.exponent = j;
    row.kappaB = std::pow(10.0, j);
    std::vector<double> ref;
    try {
      ref = solve(cp.pair, tight).sigma;
      row.mre_gsvd = relative_errors(solve(cp.pair, plain).sigma, ref).first;
    } catch (const Error&) {
      row.mre_gsvd = row.mre_gevd = nan;
      rows.push_back(row);
      continue;
    }
    const GevdResult g = gevd_route(cp.A, cp.B);
    if (g.cholesky_failed) {
      row.mre_gevd = nan;
    } else {
      std::vector<double> s(g.lambda.size());
      for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = g.lambda[i] < 0 ? nan : std::sqrt(g.lambda[i]);
      row.mre_gevd = relative_errors(s, ref).first;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hzg
