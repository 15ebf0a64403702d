// Matrix storage, file format and bordering.
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "hzgsvd/io.hpp"
#include "support.hpp"

using namespace hzg;

namespace {

std::vector<unsigned char> bytes_of(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("round trip of a 3x2 real matrix") {
  const auto dir = hzgtest::temp_dir("rt32");
  Matrix m(3, 2);
  for (std::size_t k = 0; k < 6; ++k) m.re[k] = static_cast<double>(k + 1);
  write_matrix(m, dir / "m.bin");
  const Matrix back = read_matrix(dir / "m.bin");
  CHECK(hzgtest::bitwise_equal(m, back));
  CHECK(bytes_of(dir / "m.bin").size() == 48);
}

TEST_CASE("complex 1x1 layout is real plane then imaginary plane") {
  const auto dir = hzgtest::temp_dir("c11");
  {
    std::ofstream out(dir / "z.bin", std::ios::binary);
    const double v[2] = {2.0, 3.0};
    out.write(reinterpret_cast<const char*>(v), sizeof v);
    std::ofstream h(dir / "z.bin.hdr");
    h << "rows=1\ncols=1\nfield=complex\n";
  }
  const Matrix m = read_matrix(dir / "z.bin");
  REQUIRE(m.is_complex);
  CHECK(m.re == std::vector<double>{2.0});
  CHECK(m.im == std::vector<double>{3.0});
}

TEST_CASE("size mismatch between sidecar and data") {
  const auto dir = hzgtest::temp_dir("mismatch");
  {
    std::ofstream out(dir / "a.bin", std::ios::binary);
    std::vector<double> v(15, 1.0);
    out.write(reinterpret_cast<const char*>(v.data()), 15 * sizeof(double));
    std::ofstream h(dir / "a.bin.hdr");
    h << "rows=4\ncols=4\nfield=real\n";
  }
  try {
    (void)read_matrix(dir / "a.bin");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(std::string(e.what()).find("size mismatch") != std::string::npos);
  }
}

TEST_CASE("unreadable path is an I/O error") {
  CHECK_THROWS_AS(read_matrix("/nonexistent/dir/x.bin"), Error);
  Matrix m(1, 1);
  CHECK_THROWS_AS(write_matrix(m, "/nonexistent/dir/x.bin"), Error);
}

TEST_CASE("1x1 real [1.0] encodes as little-endian 0x3FF0000000000000") {
  const auto dir = hzgtest::temp_dir("one");
  Matrix m(1, 1);
  m.re[0] = 1.0;
  write_matrix(m, dir / "one.bin");
  const auto b = bytes_of(dir / "one.bin");
  const std::vector<unsigned char> want{0, 0, 0, 0, 0, 0, 0xF0, 0x3F};
  CHECK(b == want);
}

TEST_CASE("2x1 complex [i, -i] planes") {
  const auto dir = hzgtest::temp_dir("ii");
  Matrix m(2, 1, Field::Complex);
  m.im = {1.0, -1.0};
  write_matrix(m, dir / "ii.bin");
  const auto b = bytes_of(dir / "ii.bin");
  REQUIRE(b.size() == 32);
  double v[4];
  std::memcpy(v, b.data(), 32);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 0.0);
  CHECK(v[2] == 1.0);
  CHECK(v[3] == -1.0);
}

TEST_CASE("writing twice gives identical files; specials survive") {
  const auto dir = hzgtest::temp_dir("twice");
  Matrix m(2, 2, Field::Complex);
  m.re = {-0.0, 4.9e-324, std::numeric_limits<double>::denorm_min() * 3, 1e308};
  m.im = {0.0, -0.0, -2.5e-310, 3.0};
  write_matrix(m, dir / "a.bin");
  write_matrix(m, dir / "b.bin");
  CHECK(bytes_of(dir / "a.bin") == bytes_of(dir / "b.bin"));
  CHECK(hzgtest::bitwise_equal(read_matrix(dir / "a.bin"), m));
}

TEST_CASE("bordering n=3 with multiple 4 adds one decoupled unit column") {
  Matrix f(3, 3), g(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    f.r(i, i) = static_cast<double>(i + 1);
    g.r(i, i) = 1.0;
  }
  const ProblemPair p = ProblemPair::make(f, g);
  const ProblemPair b = border_pair(p, 4, 4);
  CHECK(b.F.cols == 4);
  CHECK(b.F.rows == 4);
  CHECK(b.F.r(3, 3) == 1.0);
  CHECK(b.G.r(3, 3) == 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(b.F.r(i, 3) == 0.0);
    CHECK(b.F.r(3, i) == 0.0);
  }
  CHECK(b.original_n == 3);
  CHECK(b.original_mF == 3);
  // The padded column has sigma 1 in the bordered problem.
  SolverConfig cfg;
  cfg.block_width = 2;
  const GsvdResult r = gsvd_blocked(b, cfg);
  std::size_t unit = 0;
  for (double s : r.sigma) unit += std::abs(s - 1.0) < 1e-15;
  CHECK(unit >= 1);
}

TEST_CASE("bordering is a no-op on conforming shapes") {
  Matrix f(4, 4), g(4, 4);
  for (std::size_t k = 0; k < 16; ++k) {
    f.re[k] = static_cast<double>(k % 5) + 1.0;
    g.re[k] = static_cast<double>(k % 3);
  }
  const ProblemPair p = ProblemPair::make(f, g);
  const ProblemPair b = border_pair(p, 4, 4);
  CHECK(hzgtest::bitwise_equal(b.F, p.F));
  CHECK(hzgtest::bitwise_equal(b.G, p.G));
}

TEST_CASE("row padding m_F=5 with multiple 4 appends 3 zero rows") {
  Matrix f(5, 4), g(4, 4);
  for (double& v : f.re) v = 1.0;
  for (std::size_t i = 0; i < 4; ++i) g.r(i, i) = 1.0;
  const ProblemPair b = border_pair(ProblemPair::make(f, g), 4, 4);
  CHECK(b.F.rows == 8);
  CHECK(b.G.rows == 4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 5; i < 8; ++i) CHECK(b.F.r(i, j) == 0.0);
}

TEST_CASE("bordering preserves the generalized singular values") {
  for (std::size_t n : {3, 5, 7}) {
    const auto g = gen_pair(random_gen_spec(n, 40 + n, Field::Real));
    SolverConfig cfg;
    cfg.block_width = 2;
    const GsvdResult r = solve(g.pair, cfg);
    CHECK(r.sigma.size() == n);
    CHECK(hzgtest::max_rel_diff(r.sigma, g.sigma) < 1e-12);
  }
}

TEST_CASE("ProblemPair::make validates shapes") {
  CHECK_THROWS_AS(ProblemPair::make(Matrix(4, 3), Matrix(4, 2)), Error);
  CHECK_THROWS_AS(ProblemPair::make(Matrix(2, 3), Matrix(4, 3)), Error);
  CHECK_THROWS_AS(ProblemPair::make(Matrix(4, 3, Field::Complex), Matrix(4, 3)), Error);
}

}  // TEST_SUITE
