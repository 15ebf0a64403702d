#include "hzgsvd/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hzgsvd/dotprod.hpp"

namespace hzg {

void SolverConfig::validate() const {
  if (variant_id < 0 || variant_id > 7) throw Error(ErrorKind::Usage, "variant must be in 0..7");
  if (block_width < 1) throw Error(ErrorKind::Usage, "block width must be >= 1");
  if (max_inner_sweeps < 1 || max_outer_sweeps < 1)
    throw Error(ErrorKind::Usage, "sweep caps must be >= 1");
  if (threads < 1) throw Error(ErrorKind::Usage, "thread count must be >= 1");
}

std::vector<double> prescale_init(Matrix& F, Matrix& G, bool prescale, bool compensated) {
  std::vector<double> z0(G.cols, 1.0);
  for (std::size_t j = 0; j < G.cols; ++j) {
    const double g2 = norm_sq(col(G, j), compensated);
    if (!(g2 > 0)) throw Error(ErrorKind::Rank, "zero column in G");
    if (!prescale || g2 == 1.0) continue;
    const double s = rsqrt(g2);
    z0[j] = s;
    for (auto* m : {&F, &G}) {
      for (double& v : m->re_col(j)) v *= s;
      for (double& v : m->im_col(j)) v *= s;
    }
  }
  return z0;
}

GsvdResult gsvd_1x1(const Matrix& F, const Matrix& G) {
  if (F.cols != 1 || G.cols != 1) throw Error(ErrorKind::Usage, "gsvd_1x1 needs one column");
  const double f2 = norm_sq(col(F, 0), false), g2 = norm_sq(col(G, 0), false);
  if (!(f2 > 0) || !(g2 > 0)) throw Error(ErrorKind::Rank, "zero column");
  const double nf = std::sqrt(f2), ng = std::sqrt(g2);
  const double z = rsqrt(f2 + g2);
  GsvdResult r;
  r.U = F;
  r.V = G;
  for (auto [m, s] : {std::pair{&r.U, nf}, std::pair{&r.V, ng}}) {
    for (double& v : m->re) v /= s;
    for (double& v : m->im) v /= s;
  }
  r.Z = Matrix(1, 1, F.field());
  r.Z.re[0] = z;
  r.sigmaF = {nf * z};
  r.sigmaG = {ng * z};
  r.sigma = {r.sigmaF[0] / r.sigmaG[0]};
  r.converged = true;
  return r;
}

void apply_transform(Matrix& Y, std::size_t i, std::size_t j, const Transform2x2& z) {
  const double z11 = z.z11.re, z22 = z.z22.re;
  const bool one11 = z11 == 1.0, one22 = z22 == 1.0;
  double* yi = Y.re.data() + i * Y.rows;
  double* yj = Y.re.data() + j * Y.rows;
  if (!Y.is_complex) {
    const double z12 = z.z12.re, z21 = z.z21.re;
    for (std::size_t r = 0; r < Y.rows; ++r) {
      const double a = yi[r], b = yj[r];
      yi[r] = std::fma(b, z21, one11 ? a : a * z11);
      yj[r] = std::fma(a, z12, one22 ? b : b * z22);
    }
    return;
  }
  double* wi = Y.im.data() + i * Y.rows;
  double* wj = Y.im.data() + j * Y.rows;
  for (std::size_t r = 0; r < Y.rows; ++r) {
    const Cplx a{yi[r], wi[r]}, b{yj[r], wj[r]};
    const Cplx ni = zfma(b, z.z21, one11 ? a : scale(a, z11));
    const Cplx nj = zfma(a, z.z12, one22 ? b : scale(b, z22));
    yi[r] = ni.re;
    wi[r] = ni.im;
    yj[r] = nj.re;
    wj[r] = nj.im;
  }
}

void swap_columns(Matrix& Y, std::size_t i, std::size_t j) {
  std::swap_ranges(Y.re.begin() + static_cast<std::ptrdiff_t>(i * Y.rows),
                   Y.re.begin() + static_cast<std::ptrdiff_t>((i + 1) * Y.rows),
                   Y.re.begin() + static_cast<std::ptrdiff_t>(j * Y.rows));
  if (Y.is_complex)
    std::swap_ranges(Y.im.begin() + static_cast<std::ptrdiff_t>(i * Y.rows),
                     Y.im.begin() + static_cast<std::ptrdiff_t>((i + 1) * Y.rows),
                     Y.im.begin() + static_cast<std::ptrdiff_t>(j * Y.rows));
}

namespace {

struct PairOutcome {
  bool transformed = false;
  bool big = false;
};

PairOutcome process_pair(Matrix& F, Matrix& G, Matrix& Z, std::size_t i, std::size_t j,
                         const SolverConfig& cfg, std::size_t order) {
  const bool comp = cfg.compensated();
  PivotPair2x2 p = form_pivot(col(F, i), col(F, j), col(G, i), col(G, j), comp, cfg.prescale());
  if (!cfg.prescale()) p = rescale_pivot(p);
  if (relatively_orthogonal(p, order, cfg.gate_eps)) {
    if (cfg.sorting && p.a11 < p.a22) {
      swap_columns(F, i, j);
      swap_columns(G, i, j);
      swap_columns(Z, i, j);
    }
    return {};
  }
  const auto raw = transform(p).first;
  const Transform2x2 z = finalize_transform(raw, p, false, cfg.criterion());
  apply_transform(F, i, j, z);
  apply_transform(G, i, j, z);
  apply_transform(Z, i, j, z);
  if (cfg.sorting) {
    double d1 = z.a11pp, d2 = z.a22pp;
    if (F.is_complex) {
      d1 = norm_sq(col(F, i), comp);
      d2 = norm_sq(col(F, j), comp);
    }
    if (d1 < d2) {
      swap_columns(F, i, j);
      swap_columns(G, i, j);
      swap_columns(Z, i, j);
    }
  }
  return {true, z.is_big};
}

}  // namespace

PointwiseResult solve_pointwise(Matrix F, Matrix G, const SolverConfig& cfg, bool inner) {
  require_fused_fma();
  const std::size_t n = F.cols;
  if (n < 2 || n % 2 != 0) throw Error(ErrorKind::Usage, "pointwise solver needs even n >= 2");
  PointwiseResult res;
  const auto z0 = prescale_init(F, G, cfg.prescale(), cfg.compensated());
  res.Z = Matrix(n, n, F.field());
  for (std::size_t j = 0; j < n; ++j) res.Z.r(j, j) = z0[j];

  const StrategyTable table = gen_table(cfg.inner_kind, n);
  for (std::size_t sweep = 0; sweep < cfg.max_inner_sweeps; ++sweep) {
    SweepStats s;
    for (const auto& step : table.steps)
      for (const auto& [i, j] : step) {
        const auto o = process_pair(F, G, res.Z, i, j, cfg, n);
        s.total += o.transformed;
        s.big += o.big;
      }
    ++res.sweeps;
    res.stats += s;
    if (s.total == 0) {
      res.converged = true;
      break;
    }
  }

  if (inner) {
    for (std::size_t j = 0; j < n; ++j) {
      const double th =
          rsqrt(norm_sq(col(F, j), cfg.compensated()) + norm_sq(col(G, j), cfg.compensated()));
      if (th == 1.0) continue;
      for (double& v : res.Z.re_col(j)) v *= th;
      for (double& v : res.Z.im_col(j)) v *= th;
    }
  }
  res.F = std::move(F);
  res.G = std::move(G);
  return res;
}

}  // namespace hzg
