// Command-line front end: argument parsing and the pipelines behind each
// subcommand. Kept as a library so the tests can drive it in-process.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hzgsvd/matrix.hpp"
#include "hzgsvd/pointwise.hpp"

namespace hzgcli {

enum class Command { None, Solve, Generate, Verify, Strategy, Pitfall };

// Process exit codes.
enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kRank = 3,
  kNotConverged = 4,
  kIo = 5,
  kProtocol = 6,
};

struct CliConfig {
  Command command = Command::None;
  hzg::SolverConfig solver;
  std::size_t workers = 1;
  std::size_t inner_sweeps = 1;  // per-worker sweep cap when workers > 1
  std::uint64_t seed = 1;
  std::size_t n = 0;
  hzg::Field field = hzg::Field::Real;
  std::string gen_kind = "random";
  double g11 = 1e-10;
  std::filesystem::path f, g, out, result, reference;
  hzg::StrategyKind strategy_kind = hzg::StrategyKind::ME;
  bool dump = false;
  bool mapping = false;
  std::vector<int> exponents;
  std::string help;  // non-empty when --help was given
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws UsageError on bad input.
CliConfig parse_args(int argc, const char* const* argv);
CliConfig parse_args(const std::vector<std::string>& args);  // without the program name

int run(const CliConfig& cfg, std::ostream& out, std::ostream& err);

// Full entry point: parse, run, map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Sigma TSV: header "index sigma_f sigma_g sigma", values with 17 digits.
void write_sigma_tsv(const std::filesystem::path& path, const std::vector<double>& sf,
                     const std::vector<double>& sg, const std::vector<double>& s);
struct SigmaTable {
  std::vector<double> sigmaF, sigmaG, sigma;
};
SigmaTable read_sigma_tsv(const std::filesystem::path& path);

std::string stats_line(const hzg::GsvdResult& r);

}  // namespace hzgcli
