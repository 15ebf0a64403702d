// Argument parsing and the command pipelines, driven in-process.
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "hzgsvd/io.hpp"
#include "support.hpp"

using namespace hzgcli;
namespace fs = std::filesystem;

namespace {

int call(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::vector<const char*> argv{"hzgsvd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse: solve with defaults and explicit flags") {
  CliConfig c = parse_args({"solve", "--f", "F.bin", "--g", "G.bin", "--out", "o"});
  CHECK(c.command == Command::Solve);
  CHECK(c.solver.variant_id == 0);
  CHECK(c.solver.outer_kind == hzg::StrategyKind::ME);
  CHECK(c.solver.inner_kind == hzg::StrategyKind::ME);
  CHECK(c.solver.blocking == hzg::Blocking::FB);
  CHECK(c.solver.sorting);
  CHECK(c.solver.block_width == 8);
  CHECK(c.workers == 1);

  c = parse_args({"solve", "--f", "F.bin", "--g", "G.bin", "--out", "o", "--variant", "0",
                  "--outer", "me", "--blocking", "fb"});
  CHECK(c.solver.variant_id == 0);
  CHECK(c.solver.max_inner_sweeps == 30);

  c = parse_args({"solve", "--f", "a", "--g", "b", "--out", "o", "--blocking", "bo", "--outer",
                  "mm", "--no-sort", "--w", "4", "--workers", "2"});
  CHECK(c.solver.max_inner_sweeps == 1);
  CHECK(c.solver.outer_kind == hzg::StrategyKind::MM);
  CHECK_FALSE(c.solver.sorting);
  CHECK(c.solver.block_width == 4);
  CHECK(c.workers == 2);
}

TEST_CASE("parse: invalid input is a usage error") {
  CHECK_THROWS_AS(parse_args({"solve", "--f", "a", "--g", "b", "--out", "o", "--variant", "9"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"solve", "--f", "a", "--g", "b", "--out", "o", "--bogus"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"strategy", "--kind", "xx", "--n", "4"}), UsageError);
  CHECK_THROWS_AS(parse_args({}), UsageError);
  CHECK(call({"solve", "--variant", "9"}) == kUsage);
}

TEST_CASE("parse: strategy dump") {
  const CliConfig c = parse_args({"strategy", "--kind", "mm", "--n", "8", "--dump"});
  CHECK(c.command == Command::Strategy);
  CHECK(c.strategy_kind == hzg::StrategyKind::MM);
  CHECK(c.n == 8);
  CHECK(c.dump);
  std::string out;
  CHECK(call({"strategy", "--kind", "mm", "--n", "8", "--dump"}, &out) == kOk);
  CHECK(out == hzg::dump_table(hzg::gen_table(hzg::StrategyKind::MM, 8)));
  CHECK(call({"strategy", "--n", "7"}) == kUsage);
}

TEST_CASE("help exits cleanly") {
  std::string out;
  CHECK(call({"--help"}, &out) == kOk);
  CHECK(out.find("solve") != std::string::npos);
}

TEST_CASE("generate is deterministic") {
  const fs::path d = hzgtest::temp_dir("cli_gen");
  for (const char* sub : {"a", "b"})
    REQUIRE(call({"generate", "--n", "12", "--seed", "1", "--field", "complex", "--out",
                  (d / sub).string()}) == kOk);
  for (const char* f : {"F.bin", "F.bin.hdr", "G.bin", "sigma.tsv"})
    CHECK(slurp(d / "a" / f) == slurp(d / "b" / f));
}

TEST_CASE("ill-scaled pair: solve then verify against the known values") {
  const fs::path d = hzgtest::temp_dir("cli_pitfall4");
  REQUIRE(call({"generate", "--kind", "pitfall4", "--out", (d / "in").string()}) == kOk);
  std::string stats;
  REQUIRE(call({"solve", "--f", (d / "in/F.bin").string(), "--g", (d / "in/G.bin").string(),
                "--out", (d / "res").string(), "--w", "2"},
               &stats) == kOk);
  CHECK(stats.rfind("sweeps=", 0) == 0);
  CHECK(stats.find(" total=") != std::string::npos);
  CHECK(stats.find(" big=") != std::string::npos);
  CHECK(stats.find(" converged=1") != std::string::npos);
  CHECK(slurp(d / "res/sigma.tsv").rfind("index\tsigma_f\tsigma_g\tsigma\n", 0) == 0);

  std::string report;
  REQUIRE(call({"verify", "--f", (d / "in/F.bin").string(), "--g", (d / "in/G.bin").string(),
                "--result", (d / "res").string(), "--reference", (d / "in/sigma.tsv").string()},
               &report) == kOk);
  std::istringstream rs(report);
  std::string header;
  std::getline(rs, header);
  double resF, resG, orthU, orthV, mx, avg;
  rs >> resF >> resG >> orthU >> orthV >> mx >> avg;
  CHECK(mx <= 1e-10);
  CHECK(resF <= 1e-12);
}

TEST_CASE("two workers agree with one") {
  const fs::path d = hzgtest::temp_dir("cli_workers");
  REQUIRE(call({"generate", "--n", "24", "--seed", "3", "--out", (d / "in").string()}) == kOk);
  const std::string F = (d / "in/F.bin").string(), G = (d / "in/G.bin").string();
  REQUIRE(call({"solve", "--f", F, "--g", G, "--out", (d / "w1").string(), "--w", "2"}) == kOk);
  REQUIRE(call({"solve", "--f", F, "--g", G, "--out", (d / "w2").string(), "--w", "2",
                "--workers", "2"}) == kOk);
  const SigmaTable a = read_sigma_tsv(d / "w1/sigma.tsv"), b = read_sigma_tsv(d / "w2/sigma.tsv");
  CHECK(hzgtest::max_rel_diff(a.sigma, b.sigma) <= 1e-10);
  const SigmaTable ref = read_sigma_tsv(d / "in/sigma.tsv");
  CHECK(hzgtest::max_rel_diff(a.sigma, ref.sigma) <= 1e-11);
}

TEST_CASE("sigma TSV round-trips binary64") {
  const fs::path d = hzgtest::temp_dir("cli_tsv");
  const std::vector<double> v{0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308};
  write_sigma_tsv(d / "s.tsv", v, v, v);
  const SigmaTable t = read_sigma_tsv(d / "s.tsv");
  CHECK(hzgtest::bitwise_equal(t.sigma, v));
  CHECK(hzgtest::bitwise_equal(t.sigmaF, v));
}

TEST_CASE("exit codes") {
  const fs::path d = hzgtest::temp_dir("cli_exit");
  CHECK(call({"solve", "--f", (d / "missing.bin").string(), "--g", (d / "missing.bin").string(),
              "--out", (d / "o").string()}) == kIo);

  // Rank-deficient G: a zero column.
  hzg::Matrix F = hzg::Matrix::identity(4), G = hzg::Matrix::identity(4);
  G.r(3, 3) = 0.0;
  hzg::write_matrix(F, d / "F.bin");
  hzg::write_matrix(G, d / "G.bin");
  CHECK(call({"solve", "--f", (d / "F.bin").string(), "--g", (d / "G.bin").string(), "--out",
              (d / "o").string(), "--w", "2"}) == kRank);

  // One outer sweep is not enough for a random pair.
  REQUIRE(call({"generate", "--n", "16", "--seed", "2", "--out", (d / "in").string()}) == kOk);
  CHECK(call({"solve", "--f", (d / "in/F.bin").string(), "--g", (d / "in/G.bin").string(),
              "--out", (d / "o2").string(), "--w", "2", "--max-sweeps", "1"}) == kNotConverged);
}

TEST_CASE("pitfall table") {
  std::string out;
  REQUIRE(call({"pitfall", "--n", "16", "--j", "1", "--j", "4"}, &out) == kOk);
  std::istringstream s(out);
  std::string line;
  std::getline(s, line);
  CHECK(line == "kappaB\tmre_gsvd\tmre_gevd");
  int rows = 0;
  while (std::getline(s, line)) ++rows;
  CHECK(rows == 2);
}

}  // TEST_SUITE
