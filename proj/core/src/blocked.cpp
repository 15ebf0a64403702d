#include "hzgsvd/blocked.hpp"

#include <cmath>
#include <memory>

#include "hzgsvd/dotprod.hpp"
#include "hzgsvd/householder.hpp"
#include "hzgsvd/io.hpp"

namespace hzg {

namespace {

ColView head(const Matrix& A, std::size_t c, std::size_t len) {
  ColView v = col(A, c);
  v.re = v.re.first(len);
  if (!v.im.empty()) v.im = v.im.first(len);
  return v;
}

void scale_col(Matrix& A, std::size_t j, double s) {
  for (double& v : A.re_col(j)) v *= s;
  for (double& v : A.im_col(j)) v *= s;
}

void div_col(Matrix& A, std::size_t j, double s) {
  for (double& v : A.re_col(j)) v /= s;
  for (double& v : A.im_col(j)) v /= s;
}

bool is_identity(const Matrix& Z) {
  for (std::size_t j = 0; j < Z.cols; ++j)
    for (std::size_t i = 0; i < Z.rows; ++i) {
      if (Z.r(i, j) != (i == j ? 1.0 : 0.0)) return false;
      if (Z.is_complex && Z.i(i, j) != 0.0) return false;
    }
  return true;
}

Matrix gather_pair(const Matrix& Y, std::size_t p_first, std::size_t q_first, std::size_t w) {
  Matrix out(Y.rows, 2 * w, Y.field());
  set_columns(out, 0, columns(Y, p_first, w));
  set_columns(out, w, columns(Y, q_first, w));
  return out;
}

}  // namespace

Matrix grammian(const Matrix& Y, bool compensated) {
  const std::size_t k = Y.cols;
  Matrix M(k, k, Y.field());
  for (std::size_t c = 0; c < k; ++c) {
    M.r(c, c) = norm_sq(col(Y, c), compensated);
    for (std::size_t r = c + 1; r < k; ++r) {
      const Cplx v = dot(col(Y, r), col(Y, c), compensated);
      M.r(r, c) = v.re;
      M.r(c, r) = v.re;
      if (Y.is_complex) {
        M.i(r, c) = v.im;
        M.i(c, r) = -v.im;
      }
    }
  }
  return M;
}

std::pair<Matrix, Matrix> form_grammians(const Matrix& Fpq, const Matrix& Gpq, bool compensated) {
  return {grammian(Fpq, compensated), grammian(Gpq, compensated)};
}

Matrix cholesky_upper(const Matrix& M) {
  const std::size_t n = M.rows;
  Matrix R(n, n, M.field());
  for (std::size_t j = 0; j < n; ++j) {
    double d = M.r(j, j);
    if (j > 0) d -= norm_sq(head(R, j, j), false);
    if (!(d > 0) || !std::isfinite(d))
      throw Error(ErrorKind::NotPositiveDefinite, "Cholesky: non-positive pivot");
    const double rjj = std::sqrt(d);
    R.r(j, j) = rjj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Cplx v{M.r(j, i), M.i(j, i)};
      if (j > 0) {
        const Cplx s = dot_ordinary(head(R, j, j), head(R, i, j));
        v = {v.re - s.re, v.im - s.im};
      }
      R.r(j, i) = v.re / rjj;
      if (R.is_complex) R.i(j, i) = v.im / rjj;
    }
  }
  return R;
}

Matrix qr_shorten(const Matrix& Ypq) { return r_factor(householder_qr(Ypq, false)); }

void postmultiply(Matrix& Y, std::size_t p_first, std::size_t q_first, std::size_t w,
                  const Matrix& Zt) {
  const std::size_t k = 2 * w;
  auto colidx = [&](std::size_t c) { return c < w ? p_first + c : q_first + (c - w); };
  std::vector<Cplx> in(k), out(k);
  for (std::size_t r = 0; r < Y.rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) in[c] = {Y.r(r, colidx(c)), Y.im_at(r, colidx(c))};
    for (std::size_t c = 0; c < k; ++c) {
      Cplx acc = zmul(in[0], {Zt.r(0, c), Zt.i(0, c)});
      for (std::size_t t = 1; t < k; ++t) acc = zfma(in[t], {Zt.r(t, c), Zt.i(t, c)}, acc);
      out[c] = acc;
    }
    for (std::size_t c = 0; c < k; ++c) {
      Y.r(r, colidx(c)) = out[c].re;
      if (Y.is_complex) Y.i(r, colidx(c)) = out[c].im;
    }
  }
}

Extraction rescale_z(Matrix& F, Matrix& G, Matrix& Z, bool final, bool compensated) {
  Extraction ex;
  const std::size_t n = F.cols;
  if (final) {
    ex.sigmaF.resize(n);
    ex.sigmaG.resize(n);
    ex.sigma.resize(n);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double nf = norm_sq(col(F, j), compensated);
    const double ng = norm_sq(col(G, j), compensated);
    if (!(ng > 0)) throw Error(ErrorKind::Rank, "zero column in G");
    const double th = rsqrt(nf + ng);
    if (th != 1.0) scale_col(Z, j, th);
    if (!final) continue;
    const double sf = std::sqrt(nf), sg = std::sqrt(ng);
    if (nf != 1.0 && nf > 0) div_col(F, j, sf);
    if (ng != 1.0) div_col(G, j, sg);
    ex.sigmaF[j] = th != 1.0 ? sf * th : sf;
    ex.sigmaG[j] = th != 1.0 ? sg * th : sg;
    ex.sigma[j] = ex.sigmaF[j] / ex.sigmaG[j];
  }
  return ex;
}

TallReduction preprocess_tall(const Matrix& F, const Matrix& G) {
  const std::size_t n = F.cols;
  const HouseholderQR qf = householder_qr(F, true);
  Matrix gp(G.rows, n, G.field());
  for (std::size_t j = 0; j < n; ++j) set_columns(gp, j, columns(G, qf.perm[j], 1));
  const HouseholderQR qg = householder_qr(gp, true);
  const Matrix rf = r_factor(qf);
  TallReduction t;
  t.F = Matrix(n, n, F.field());
  for (std::size_t j = 0; j < n; ++j) set_columns(t.F, j, columns(rf, qg.perm[j], 1));
  t.G = r_factor(qg);
  t.QF = thin_q(qf);
  t.QG = thin_q(qg);
  t.perm.resize(n);
  for (std::size_t j = 0; j < n; ++j) t.perm[j] = qf.perm[qg.perm[j]];
  return t;
}

DriverOutcome run_block_sweeps(Matrix& F, Matrix& G, Matrix& Z, const SolverConfig& cfg,
                               std::size_t max_sweeps, TaskPool& pool) {
  const std::size_t w = cfg.block_width, n = F.cols;
  if (n % w != 0 || (n / w) % 2 != 0)
    throw Error(ErrorKind::Usage, "column count must be an even multiple of the block width");
  const bool comp = cfg.compensated();
  const StrategyTable table = gen_table(cfg.outer_kind, n / w);
  DriverOutcome out;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    SweepStats s;
    for (const auto& step : table.steps) {
      std::vector<SweepStats> per(step.size());
      pool.parallel_for(step.size(), [&](std::size_t l) {
        const std::size_t pf = step[l].first * w, qf = step[l].second * w;
        const Matrix fpq = gather_pair(F, pf, qf, w);
        const Matrix gpq = gather_pair(G, pf, qf, w);
        Matrix fh, gh;
        bool use_qr = cfg.always_qr;
        if (!use_qr) {
          try {
            auto [a, b] = form_grammians(fpq, gpq, comp);
            fh = cholesky_upper(a);
            gh = cholesky_upper(b);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotPositiveDefinite || !cfg.fallback_qr)
              throw Error(ErrorKind::Rank, std::string("block factorization failed: ") + e.what());
            use_qr = true;
          }
        }
        if (use_qr) {
          fh = qr_shorten(fpq);
          gh = qr_shorten(gpq);
        }
        PointwiseResult in = solve_pointwise(std::move(fh), std::move(gh), cfg, true);
        per[l] = in.stats;
        if (is_identity(in.Z)) return;
        postmultiply(F, pf, qf, w, in.Z);
        postmultiply(G, pf, qf, w, in.Z);
        postmultiply(Z, pf, qf, w, in.Z);
      });
      for (const auto& x : per) s += x;
    }
    ++out.sweeps;
    out.stats += s;
    if (s.big == 0) {
      out.converged = true;
      break;
    }
    rescale_z(F, G, Z, false, comp);
  }
  return out;
}

GsvdResult gsvd_blocked(const ProblemPair& p, const SolverConfig& cfg, TaskPool* pool) {
  require_fused_fma();
  cfg.validate();
  std::unique_ptr<TaskPool> own;
  if (!pool) {
    own = std::make_unique<TaskPool>(cfg.threads);
    pool = own.get();
  }
  Matrix F = p.F, G = p.G;
  const std::size_t n = F.cols;
  const auto z0 = prescale_init(F, G, cfg.prescale(), cfg.compensated());
  Matrix Z(n, n, F.field());
  for (std::size_t j = 0; j < n; ++j) Z.r(j, j) = z0[j];
  const DriverOutcome d = run_block_sweeps(F, G, Z, cfg, cfg.max_outer_sweeps, *pool);
  Extraction ex = rescale_z(F, G, Z, true, cfg.compensated());
  GsvdResult r;
  r.U = std::move(F);
  r.V = std::move(G);
  r.Z = std::move(Z);
  r.sigmaF = std::move(ex.sigmaF);
  r.sigmaG = std::move(ex.sigmaG);
  r.sigma = std::move(ex.sigma);
  r.sweeps = d.sweeps;
  r.total_transforms = d.stats.total;
  r.big_transforms = d.stats.big;
  r.converged = d.converged;
  return r;
}

GsvdResult unborder(const GsvdResult& r, std::size_t n, std::size_t mF, std::size_t mG) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < r.Z.cols; ++j) {
    bool data = false;
    for (std::size_t i = 0; i < n && !data; ++i)
      data = r.Z.r(i, j) != 0.0 || (r.Z.is_complex && r.Z.i(i, j) != 0.0);
    if (data) keep.push_back(j);
  }
  if (keep.size() != n) throw Error(ErrorKind::Rank, "bordered columns coupled with data columns");
  GsvdResult o;
  o.U = Matrix(mF, n, r.U.field());
  o.V = Matrix(mG, n, r.V.field());
  o.Z = Matrix(n, n, r.Z.field());
  auto copy_rows = [](const Matrix& src, std::size_t sj, Matrix& dst, std::size_t dj) {
    for (std::size_t i = 0; i < dst.rows; ++i) {
      dst.r(i, dj) = src.r(i, sj);
      if (dst.is_complex) dst.i(i, dj) = src.i(i, sj);
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = keep[k];
    copy_rows(r.U, j, o.U, k);
    copy_rows(r.V, j, o.V, k);
    copy_rows(r.Z, j, o.Z, k);
    o.sigmaF.push_back(r.sigmaF[j]);
    o.sigmaG.push_back(r.sigmaG[j]);
    o.sigma.push_back(r.sigma[j]);
  }
  o.sweeps = r.sweeps;
  o.total_transforms = r.total_transforms;
  o.big_transforms = r.big_transforms;
  o.converged = r.converged;
  o.workers = r.workers;
  return o;
}

GsvdResult solve(const ProblemPair& p, const SolverConfig& cfg) {
  cfg.validate();
  if (p.F.cols == 1) return gsvd_1x1(p.F, p.G);
  const std::size_t n = p.F.cols;
  const bool tall = cfg.preprocess_qr && (p.F.rows > n || p.G.rows > n);
  TallReduction red;
  ProblemPair work = p;
  if (tall) {
    red = preprocess_tall(p.F, p.G);
    work = ProblemPair::make(red.F, red.G);
  }
  const std::size_t mF = work.F.rows, mG = work.G.rows;
  const std::size_t m2w = 2 * cfg.block_width;
  GsvdResult r = unborder(gsvd_blocked(border_pair(work, m2w, m2w), cfg), n, mF, mG);
  if (tall) {
    r.U = matmul(red.QF, r.U);
    r.V = matmul(red.QG, r.V);
    Matrix z(n, n, r.Z.field());
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        z.r(red.perm[i], j) = r.Z.r(i, j);
        if (z.is_complex) z.i(red.perm[i], j) = r.Z.i(i, j);
      }
    r.Z = std::move(z);
  }
  return r;
}

}  // namespace hzg
