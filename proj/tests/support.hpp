// Shared helpers for the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "hzgsvd/blocked.hpp"
#include "hzgsvd/distsim.hpp"
#include "hzgsvd/harness.hpp"

namespace hzgtest {

// Distance in units in the last place between two finite doubles.
inline std::uint64_t ulp_distance(double a, double b) {
  auto key = [](double x) {
    std::int64_t i;
    std::memcpy(&i, &x, sizeof i);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  const std::int64_t ka = key(a), kb = key(b);
  return ka > kb ? static_cast<std::uint64_t>(ka - kb) : static_cast<std::uint64_t>(kb - ka);
}

inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  return hzg::relative_errors(a, b).first;
}

inline bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

inline bool bitwise_equal(const hzg::Matrix& a, const hzg::Matrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.is_complex == b.is_complex &&
         bitwise_equal(a.re, b.re) && bitwise_equal(a.im, b.im);
}

inline bool bitwise_equal(const hzg::GsvdResult& a, const hzg::GsvdResult& b) {
  return bitwise_equal(a.U, b.U) && bitwise_equal(a.V, b.V) && bitwise_equal(a.Z, b.Z) &&
         bitwise_equal(a.sigmaF, b.sigmaF) && bitwise_equal(a.sigmaG, b.sigmaG) &&
         bitwise_equal(a.sigma, b.sigma);
}

struct CorpusItem {
  hzg::GeneratedPair gen;
  hzg::Field field;
  std::size_t n;
  std::uint64_t seed;
};

// 10 real and 10 complex pairs, n in {64, 128, 256}, prescribed values in [1e-2, 1].
inline std::vector<CorpusItem> make_corpus(std::size_t per_field = 10) {
  static const std::size_t sizes[] = {64, 128, 256, 64, 128, 64, 256, 64, 128, 64};
  std::vector<CorpusItem> out;
  for (int f = 0; f < 2; ++f)
    for (std::size_t k = 0; k < per_field; ++k) {
      const auto field = f ? hzg::Field::Complex : hzg::Field::Real;
      const std::size_t n = sizes[k % 10];
      const std::uint64_t seed = 1000 + 100 * static_cast<std::uint64_t>(f) + k;
      out.push_back({hzg::gen_pair(hzg::random_gen_spec(n, seed, field)), field, n, seed});
    }
  return out;
}

// A small mixed corpus for quick unit tests.
inline std::vector<CorpusItem> small_corpus() {
  std::vector<CorpusItem> out;
  std::uint64_t seed = 7;
  for (auto field : {hzg::Field::Real, hzg::Field::Complex})
    for (std::size_t n : {6, 16, 32}) {
      out.push_back({hzg::gen_pair(hzg::random_gen_spec(n, seed, field)), field, n, seed});
      ++seed;
    }
  return out;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("hzgsvd_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace hzgtest
