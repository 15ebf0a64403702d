#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hzgsvd/blocked.hpp"
#include "hzgsvd/distsim.hpp"
#include "hzgsvd/harness.hpp"
#include "hzgsvd/io.hpp"

namespace hzgcli {

namespace fs = std::filesystem;
using hzg::Error;
using hzg::ErrorKind;

namespace {

// Known generalized singular values of the ill-scaled 4x4 pair with g11 = 1e-10.
const std::vector<double> kIllScaledSigma{1.414213562302384e10, 9.999999999999997e-1,
                                          9.999999999999997e-1, 7.071067812219032e-1};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_solver_options(CLI::App& sub, CliConfig& c, std::string& outer, std::string& inner,
                        std::string& blocking) {
  sub.add_option("--variant", c.solver.variant_id, "variant 0..7")->check(CLI::Range(0, 7));
  sub.add_option("--outer", outer, "outer strategy")->check(CLI::IsMember({"me", "mm"}));
  sub.add_option("--inner", inner, "inner strategy")->check(CLI::IsMember({"me", "mm"}));
  sub.add_option("--blocking", blocking, "fb (full inner sweeps) or bo (one inner sweep)")
      ->check(CLI::IsMember({"fb", "bo"}));
  sub.add_flag("--sort,!--no-sort", c.solver.sorting, "sort pivot columns (default on)");
  sub.add_option("--w", c.solver.block_width, "block width")->check(CLI::PositiveNumber);
  sub.add_option("--workers", c.workers, "simulated workers")->check(CLI::PositiveNumber);
  sub.add_option("--inner-sweeps", c.inner_sweeps, "sweep cap per worker call")
      ->check(CLI::PositiveNumber);
  sub.add_option("--threads", c.solver.threads, "task pool size")->check(CLI::PositiveNumber);
  sub.add_option("--max-sweeps", c.solver.max_outer_sweeps, "outer sweep cap")
      ->check(CLI::PositiveNumber);
  sub.add_flag("--qr-preprocess", c.solver.preprocess_qr, "reduce tall pairs to square first");
  sub.add_flag("--always-qr", c.solver.always_qr, "shorten blocks by QR instead of Cholesky");
}

hzg::Field parse_field(const std::string& s) {
  return s == "complex" ? hzg::Field::Complex : hzg::Field::Real;
}

hzg::GsvdResult run_solver(const hzg::ProblemPair& p, const CliConfig& c) {
  if (c.workers == 1 || p.n() == 1) return hzg::solve(p, c.solver);
  hzg::DistributedOptions opt;
  opt.workers = c.workers;
  opt.inner_sweeps = c.inner_sweeps;
  opt.threads = c.solver.threads;
  return hzg::solve_distributed(p, c.solver, opt);
}

void ensure_dir(const fs::path& d) {
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + d.string() + ": " + ec.message());
}

int cmd_solve(const CliConfig& c, std::ostream& out) {
  const hzg::ProblemPair p = hzg::ProblemPair::make(hzg::read_matrix(c.f), hzg::read_matrix(c.g));
  const hzg::GsvdResult r = run_solver(p, c);
  ensure_dir(c.out);
  hzg::write_matrix(r.U, c.out / "U.bin");
  hzg::write_matrix(r.V, c.out / "V.bin");
  hzg::write_matrix(r.Z, c.out / "Z.bin");
  write_sigma_tsv(c.out / "sigma.tsv", r.sigmaF, r.sigmaG, r.sigma);
  const std::string stats = stats_line(r);
  std::ofstream(c.out / "stats.txt") << stats << '\n';
  out << stats << '\n';
  return r.converged ? kOk : kNotConverged;
}

int cmd_generate(const CliConfig& c, std::ostream& out) {
  hzg::ProblemPair p;
  std::vector<double> sf, sg, s;
  if (c.gen_kind == "random") {
    if (c.n < 1) throw UsageError("generate random needs --n >= 1");
    const hzg::GenSpec spec = hzg::random_gen_spec(c.n, c.seed, c.field);
    p = hzg::gen_pair(spec).pair;
    std::vector<std::size_t> idx(c.n);
    std::iota(idx.begin(), idx.end(), 0);
    auto ratio = [&](std::size_t i) { return spec.sigmaF[i] / spec.sigmaG[i]; };
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });
    for (std::size_t i : idx) {
      const double h = std::hypot(spec.sigmaF[i], spec.sigmaG[i]);
      sf.push_back(spec.sigmaF[i] / h);
      sg.push_back(spec.sigmaG[i] / h);
      s.push_back(ratio(i));
    }
  } else {
    p = hzg::ill_scaled_pair(c.g11);
    if (c.g11 != 1e-10) throw UsageError("reference values are known only for --g11 1e-10");
    for (double v : kIllScaledSigma) {
      const double h = std::hypot(v, 1.0);
      sf.push_back(v / h);
      sg.push_back(1.0 / h);
      s.push_back(v);
    }
  }
  ensure_dir(c.out);
  hzg::write_matrix(p.F, c.out / "F.bin");
  hzg::write_matrix(p.G, c.out / "G.bin");
  write_sigma_tsv(c.out / "sigma.tsv", sf, sg, s);
  out << "wrote " << (c.out / "F.bin").string() << ' ' << (c.out / "G.bin").string() << ' '
      << (c.out / "sigma.tsv").string() << '\n';
  return kOk;
}

int cmd_verify(const CliConfig& c, std::ostream& out) {
  const hzg::ProblemPair p = hzg::ProblemPair::make(hzg::read_matrix(c.f), hzg::read_matrix(c.g));
  hzg::GsvdResult r;
  r.U = hzg::read_matrix(c.result / "U.bin");
  r.V = hzg::read_matrix(c.result / "V.bin");
  r.Z = hzg::read_matrix(c.result / "Z.bin");
  const SigmaTable t = read_sigma_tsv(c.result / "sigma.tsv");
  r.sigmaF = t.sigmaF;
  r.sigmaG = t.sigmaG;
  r.sigma = t.sigma;
  std::optional<std::vector<double>> ref;
  if (!c.reference.empty()) ref = read_sigma_tsv(c.reference).sigma;
  const hzg::AccuracyReport a = hzg::accuracy_report(p, r, ref);
  out << "resF\tresG\torthU\torthV\tmax_rel_sigma\tavg_rel_sigma\n";
  out << fmt17(a.resF) << '\t' << fmt17(a.resG) << '\t' << fmt17(a.orthU) << '\t'
      << fmt17(a.orthV) << '\t' << (a.has_reference ? fmt17(a.max_rel_sigma) : "-") << '\t'
      << (a.has_reference ? fmt17(a.avg_rel_sigma) : "-") << '\n';
  return kOk;
}

int cmd_strategy(const CliConfig& c, std::ostream& out) {
  if (c.n < 2 || c.n % 2) throw UsageError("strategy needs an even --n >= 2");
  const hzg::StrategyTable t = hzg::gen_table(c.strategy_kind, c.n);
  if (c.dump) out << hzg::dump_table(t);
  if (c.mapping) out << hzg::dump_mapping(hzg::comm_mapping(t));
  if (!c.dump && !c.mapping) {
    const hzg::TableReport rep = hzg::validate_table(t);
    out << "kind=" << hzg::to_string(t.kind) << " n=" << t.order << " steps=" << t.steps.size()
        << " cyclic=" << rep.cyclic << " coverage=" << rep.coverage_ok
        << " disjoint=" << rep.disjoint_ok << '\n';
  }
  return kOk;
}

int cmd_pitfall(const CliConfig& c, std::ostream& out) {
  std::vector<int> js = c.exponents;
  if (js.empty())
    for (int j = 1; j <= 16; ++j) js.push_back(j);
  const auto rows = hzg::pitfall_report(c.n ? c.n : 64, js, c.seed);
  out << "kappaB\tmre_gsvd\tmre_gevd\n";
  for (const auto& r : rows)
    out << fmt17(r.kappaB) << '\t' << fmt17(r.mre_gsvd) << '\t' << fmt17(r.mre_gevd) << '\n';
  return kOk;
}

}  // namespace

std::string stats_line(const hzg::GsvdResult& r) {
  std::ostringstream s;
  s << "sweeps=" << r.sweeps << " total=" << r.total_transforms << " big=" << r.big_transforms
    << " converged=" << (r.converged ? 1 : 0);
  return s.str();
}

void write_sigma_tsv(const fs::path& path, const std::vector<double>& sf,
                     const std::vector<double>& sg, const std::vector<double>& s) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw Error(ErrorKind::Io, "cannot write " + path.string());
  o << "index\tsigma_f\tsigma_g\tsigma\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    o << i << '\t' << fmt17(sf[i]) << '\t' << fmt17(sg[i]) << '\t' << fmt17(s[i]) << '\n';
  if (!o) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

SigmaTable read_sigma_tsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("index", 0) != 0) throw Error(ErrorKind::Io, "bad sigma header in " + path.string());
  SigmaTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t idx;
    double a, b, c;
    if (!(ls >> idx >> a >> b >> c)) throw Error(ErrorKind::Io, "bad sigma row in " + path.string());
    t.sigmaF.push_back(a);
    t.sigmaG.push_back(b);
    t.sigma.push_back(c);
  }
  return t;
}

CliConfig parse_args(int argc, const char* const* argv) {
  CliConfig c;
  CLI::App app{"Generalized SVD by implicit Hari-Zimmermann Jacobi sweeps", "hzgsvd"};
  app.require_subcommand(1);
  std::string outer = "me", inner = "me", blocking = "fb", field = "real", kind = "me";

  auto* solve = app.add_subcommand("solve", "solve F, G and write U, V, Z and sigma");
  solve->add_option("--f", c.f, "F matrix file")->required();
  solve->add_option("--g", c.g, "G matrix file")->required();
  solve->add_option("--out", c.out, "output directory")->required();
  add_solver_options(*solve, c, outer, inner, blocking);

  auto* gen = app.add_subcommand("generate", "write a test pair and its reference sigma");
  gen->add_option("--kind", c.gen_kind, "random or pitfall4")
      ->check(CLI::IsMember({"random", "pitfall4"}));
  gen->add_option("--n", c.n, "order");
  gen->add_option("--seed", c.seed, "seed");
  gen->add_option("--field", field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  gen->add_option("--g11", c.g11, "leading entry of G for pitfall4");
  gen->add_option("--out", c.out, "output directory")->required();

  auto* ver = app.add_subcommand("verify", "accuracy report of a solve result");
  ver->add_option("--f", c.f, "F matrix file")->required();
  ver->add_option("--g", c.g, "G matrix file")->required();
  ver->add_option("--result", c.result, "directory written by solve")->required();
  ver->add_option("--reference", c.reference, "reference sigma TSV");

  auto* st = app.add_subcommand("strategy", "print or check a pivot ordering");
  st->add_option("--kind", kind, "me or mm")->check(CLI::IsMember({"me", "mm"}));
  st->add_option("--n", c.n, "order (even)")->required();
  st->add_flag("--dump", c.dump, "print the steps");
  st->add_flag("--mapping", c.mapping, "print the stripe routing");

  auto* pit = app.add_subcommand("pitfall", "GSVD vs Grammian-route accuracy table");
  pit->add_option("--n", c.n, "order (default 64)");
  pit->add_option("--seed", c.seed, "seed");
  pit->add_option("--j", c.exponents, "condition exponents of B (default 1..16)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    c.help = app.help();
    return c;
  } catch (const CLI::CallForAllHelp&) {
    c.help = app.help("", CLI::AppFormatMode::All);
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : {solve, gen, ver, st, pit})
    if (sub->parsed() && sub->count("--help")) c.help = sub->help();

  if (solve->parsed()) c.command = Command::Solve;
  if (gen->parsed()) c.command = Command::Generate;
  if (ver->parsed()) c.command = Command::Verify;
  if (st->parsed()) c.command = Command::Strategy;
  if (pit->parsed()) c.command = Command::Pitfall;
  c.solver.outer_kind = hzg::parse_strategy_kind(outer);
  c.solver.inner_kind = hzg::parse_strategy_kind(inner);
  const std::size_t outer_cap = c.solver.max_outer_sweeps;
  c.solver.set_blocking(blocking == "bo" ? hzg::Blocking::BO : hzg::Blocking::FB);
  c.solver.max_outer_sweeps = outer_cap;
  c.field = parse_field(field);
  c.strategy_kind = hzg::parse_strategy_kind(kind);
  try {
    c.solver.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return c;
}

CliConfig parse_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"hzgsvd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

int run(const CliConfig& c, std::ostream& out, std::ostream&) {
  switch (c.command) {
    case Command::Solve: return cmd_solve(c, out);
    case Command::Generate: return cmd_generate(c, out);
    case Command::Verify: return cmd_verify(c, out);
    case Command::Strategy: return cmd_strategy(c, out);
    case Command::Pitfall: return cmd_pitfall(c, out);
    case Command::None: break;
  }
  throw UsageError("no command");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const CliConfig c = parse_args(argc, argv);
    if (!c.help.empty()) {
      out << c.help;
      return kOk;
    }
    return run(c, out, err);
  } catch (const UsageError& e) {
    err << "hzgsvd: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "hzgsvd: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Usage: return kUsage;
      case ErrorKind::Io: return kIo;
      case ErrorKind::Protocol: return kProtocol;
      case ErrorKind::Rank:
      case ErrorKind::NotPositiveDefinite:
      case ErrorKind::Singular: return kRank;
    }
    return kRank;
  }
}

}  // namespace hzgcli
