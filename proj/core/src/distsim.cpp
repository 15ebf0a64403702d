#include "hzgsvd/distsim.hpp"

#include <algorithm>
#include <memory>

#include "hzgsvd/io.hpp"

namespace hzg {

std::vector<StripeState> partition_stripes(const ProblemPair& p, std::size_t s,
                                           const StrategyTable& outer, std::size_t w) {
  const std::size_t n = p.F.cols;
  if (s < 1 || w < 1 || n % (2 * w * s) != 0)
    throw Error(ErrorKind::Usage, "column count not divisible by 2 * w * workers");
  if (outer.order != 2 * s) throw Error(ErrorKind::Usage, "outermost table must order 2s stripes");
  const std::size_t ws = n / (2 * s);
  std::vector<StripeState> st(s);
  for (std::size_t r = 0; r < s; ++r) {
    auto& x = st[r];
    x.rank = r;
    x.p = outer.steps[0][r].first;
    x.q = outer.steps[0][r].second;
    x.width = ws;
    x.F = Matrix(p.F.rows, 2 * ws, p.F.field());
    x.G = Matrix(p.G.rows, 2 * ws, p.G.field());
    set_columns(x.F, 0, columns(p.F, x.p * ws, ws));
    set_columns(x.F, ws, columns(p.F, x.q * ws, ws));
    set_columns(x.G, 0, columns(p.G, x.p * ws, ws));
    set_columns(x.G, ws, columns(p.G, x.q * ws, ws));
    x.Z = Matrix(n, 2 * ws, p.F.field());
  }
  return st;
}

int stripe_tag(std::size_t y, bool imag, bool second_slot, bool complex) {
  if (complex) return static_cast<int>(1 + 2 * y + (imag ? 1 : 0)) + (second_slot ? 6 : 0);
  return static_cast<int>(1 + y) + (second_slot ? 3 : 0);
}

namespace {

Matrix& plane_owner(StripeState& s, std::size_t y) { return y == 0 ? s.F : y == 1 ? s.G : s.Z; }

}  // namespace

void exchange_step(std::vector<StripeState>& states, const StrategyTable& outer,
                   const CommMapping& m, std::size_t k, std::vector<StripeMessage>* log) {
  const std::size_t s = states.size();
  const bool cx = states[0].F.is_complex;
  const int planes = cx ? 2 : 1;
  const int ntags = 6 * planes;
  std::vector<std::vector<StripeMessage>> mailbox(s);

  for (std::size_t r = 0; r < s; ++r) {
    StripeState& x = states[r];
    const Route& route = m.routes[k][r];
    if (route.p != x.p || route.q != x.q)
      throw Error(ErrorKind::Protocol, "worker holds stripes the mapping does not expect");
    for (int o = 0; o < 2; ++o) {
      const long t = o == 0 ? route.t0 : route.t1;
      const std::size_t dest = decode_rank(t);
      if (t == 0 || dest >= s) throw Error(ErrorKind::Protocol, "bad destination encoding");
      for (std::size_t y = 0; y < 3; ++y)
        for (int v = 0; v < planes; ++v) {
          const Matrix& src = plane_owner(x, y);
          const std::vector<double>& plane = v == 0 ? src.re : src.im;
          const std::size_t len = x.width * src.rows;
          StripeMessage msg;
          msg.tag = stripe_tag(y, v == 1, decode_second_slot(t), cx);
          msg.source = r;
          msg.payload.assign(plane.begin() + static_cast<std::ptrdiff_t>(o * len),
                             plane.begin() + static_cast<std::ptrdiff_t>((o + 1) * len));
          if (log) log->push_back(msg);
          mailbox[dest].push_back(std::move(msg));
        }
    }
  }

  const auto& next = outer.steps[(k + 1) % outer.steps.size()];
  for (std::size_t r = 0; r < s; ++r) {
    StripeState& x = states[r];
    StripeState in = x;
    std::vector<char> seen(static_cast<std::size_t>(ntags) + 1, 0);
    for (const auto& msg : mailbox[r]) {
      if (msg.tag < 1 || msg.tag > ntags || seen[static_cast<std::size_t>(msg.tag)])
        throw Error(ErrorKind::Protocol, "unexpected or duplicate tag " + std::to_string(msg.tag));
      seen[static_cast<std::size_t>(msg.tag)] = 1;
      const int per = 3 * planes;
      const int slot = (msg.tag - 1) / per;
      const int idx = (msg.tag - 1) % per;
      const std::size_t y = static_cast<std::size_t>(idx / planes);
      const bool imag = idx % planes == 1;
      Matrix& dst = plane_owner(in, y);
      std::vector<double>& plane = imag ? dst.im : dst.re;
      const std::size_t len = x.width * dst.rows;
      if (msg.payload.size() != len) throw Error(ErrorKind::Protocol, "payload size mismatch");
      std::copy(msg.payload.begin(), msg.payload.end(),
                plane.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(slot) * len));
    }
    for (int t = 1; t <= ntags; ++t)
      if (!seen[static_cast<std::size_t>(t)])
        throw Error(ErrorKind::Protocol, "missing tag " + std::to_string(t));
    in.p = next[r].first;
    in.q = next[r].second;
    x = std::move(in);
  }
}

GsvdResult run_distributed(const ProblemPair& p, const SolverConfig& cfg,
                           const DistributedOptions& opt) {
  cfg.validate();
  const std::size_t s = opt.workers;
  const StrategyTable outer = gen_table(cfg.outer_kind, 2 * s);
  const CommMapping mapping = comm_mapping(outer);
  std::vector<StripeState> st = partition_stripes(p, s, outer, cfg.block_width);
  const std::size_t ws = st[0].width;
  const bool comp = cfg.compensated();

  for (auto& x : st) {
    const auto z0 = prescale_init(x.F, x.G, cfg.prescale(), comp);
    for (std::size_t c = 0; c < 2 * ws; ++c) {
      const std::size_t logical = c < ws ? x.p * ws + c : x.q * ws + (c - ws);
      x.Z.r(logical, c) = z0[c];
    }
  }

  TaskPool pool(opt.threads);
  const bool single_step = outer.steps.size() == 1;
  GsvdResult res;
  res.workers = s;
  SweepStats total;
  for (std::size_t c = 0; c < opt.max_outermost_sweeps; ++c) {
    SweepStats sweep;
    bool all_converged = true;
    for (std::size_t k = 0; k < outer.steps.size(); ++k) {
      std::vector<DriverOutcome> out(s);
      pool.parallel_for(s, [&](std::size_t r) {
        TaskPool local(1);
        auto& x = st[r];
        out[r] = run_block_sweeps(x.F, x.G, x.Z, cfg, opt.inner_sweeps, local);
        if (!(single_step && out[r].converged)) rescale_z(x.F, x.G, x.Z, false, comp);
      });
      for (const auto& o : out) {
        sweep += o.stats;
        all_converged = all_converged && o.converged;
      }
      exchange_step(st, outer, mapping, k);
    }
    ++res.sweeps;
    total += sweep;
    if (sweep.big == 0 || (single_step && all_converged)) {
      res.converged = true;
      break;
    }
  }

  const std::size_t n = p.F.cols;
  res.U = Matrix(p.F.rows, n, p.F.field());
  res.V = Matrix(p.G.rows, n, p.G.field());
  res.Z = Matrix(n, n, p.F.field());
  res.sigmaF.resize(n);
  res.sigmaG.resize(n);
  res.sigma.resize(n);
  for (auto& x : st) {
    Extraction ex = rescale_z(x.F, x.G, x.Z, true, comp);
    for (int o = 0; o < 2; ++o) {
      const std::size_t g0 = (o == 0 ? x.p : x.q) * ws;
      const std::size_t l0 = static_cast<std::size_t>(o) * ws;
      set_columns(res.U, g0, columns(x.F, l0, ws));
      set_columns(res.V, g0, columns(x.G, l0, ws));
      set_columns(res.Z, g0, columns(x.Z, l0, ws));
      for (std::size_t j = 0; j < ws; ++j) {
        res.sigmaF[g0 + j] = ex.sigmaF[l0 + j];
        res.sigmaG[g0 + j] = ex.sigmaG[l0 + j];
        res.sigma[g0 + j] = ex.sigma[l0 + j];
      }
    }
  }
  res.total_transforms = total.total;
  res.big_transforms = total.big;
  return res;
}

GsvdResult solve_distributed(const ProblemPair& p, const SolverConfig& cfg,
                             const DistributedOptions& opt) {
  cfg.validate();
  if (opt.workers < 1) throw Error(ErrorKind::Usage, "worker count must be >= 1");
  if (p.F.cols == 1) return gsvd_1x1(p.F, p.G);
  const std::size_t unit = 2 * cfg.block_width;
  const ProblemPair b = border_pair(p, unit * opt.workers, unit);
  GsvdResult r = run_distributed(b, cfg, opt);
  return unborder(r, p.F.cols, p.F.rows, p.G.rows);
}

}  // namespace hzg
