// Test-pair generators, accuracy metrics and the Grammian-based (GEVD) route
// used to show what is lost by forming F^H F and G^H G explicitly.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hzgsvd/matrix.hpp"
#include "hzgsvd/pointwise.hpp"

namespace hzg {

// SplitMix64: state advances by the golden-ratio increment, output is the
// standard 64-bit finalizer. split() derives an independent stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();   // in [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

Matrix random_orthogonal(std::size_t n, std::uint64_t seed, Field field);

struct GenSpec {
  std::size_t n = 0;
  std::vector<double> sigmaF;
  std::vector<double> sigmaG;
  std::vector<double> lambdaX;
  std::uint64_t seed = 0;
  Field field = Field::Real;
  bool identity_factors = false;  // U = V = X = I
};

// Prescribed values uniform in [lo, hi].
GenSpec random_gen_spec(std::size_t n, std::uint64_t seed, Field field, double lo = 1e-2,
                        double hi = 1.0);

struct GeneratedPair {
  ProblemPair pair;
  std::vector<double> sigma;  // descending
};

GeneratedPair gen_pair(const GenSpec& spec);

struct ConditionPair {
  ProblemPair pair;
  Matrix A;
  Matrix B;
};

ConditionPair gen_condition_pair(std::size_t n, int kappa_exponent, std::uint64_t seed,
                                 Field field = Field::Real);

// F all ones on and above the diagonal; G the same with g11 replaced.
ProblemPair ill_scaled_pair(double g11 = 1e-10);

// A * B with every entry a compensated dot product.
Matrix matmul_compensated(const Matrix& a, const Matrix& b);

// Inverse by LU with complete pivoting in extended precision.
Matrix inverse(const Matrix& z);

struct AccuracyReport {
  double resF = 0, resG = 0;
  double orthU = 0, orthV = 0;
  double max_rel_sigma = 0, avg_rel_sigma = 0;
  bool has_reference = false;
};

AccuracyReport accuracy_report(const ProblemPair& p, const GsvdResult& r,
                               const std::optional<std::vector<double>>& reference = std::nullopt);

// Max and mean relative error after sorting both descending.
std::pair<double, double> relative_errors(std::vector<double> got, std::vector<double> ref);

struct GevdResult {
  bool cholesky_failed = false;
  std::vector<double> lambda;  // descending
};

std::vector<double> jacobi_eigenvalues(const Matrix& C, std::size_t max_sweeps = 30);
GevdResult gevd_route(const Matrix& A, const Matrix& B);

struct PitfallRow {
  int exponent = 0;
  double kappaB = 0;
  double mre_gsvd = 0;
  double mre_gevd = 0;
};

std::vector<PitfallRow> pitfall_report(std::size_t n, const std::vector<int>& exponents,
                                       std::uint64_t seed);

}  // namespace hzg
