#include "hzgsvd/strategy.hpp"

#include <algorithm>
#include <sstream>

#include "hzgsvd/matrix.hpp"

namespace hzg {

StrategyKind parse_strategy_kind(const std::string& s) {
  if (s == "me" || s == "ME") return StrategyKind::ME;
  if (s == "mm" || s == "MM") return StrategyKind::MM;
  throw Error(ErrorKind::Usage, "unknown strategy kind: " + s);
}

const char* to_string(StrategyKind k) { return k == StrategyKind::ME ? "me" : "mm"; }

namespace {

IndexPair ordered(std::size_t a, std::size_t b) { return a < b ? IndexPair{a, b} : IndexPair{b, a}; }

// Circle method laid out so that step 0 pairs (0,1), (2,3), ...
// Position 0 is fixed; the others rotate along the ring
// 2, 4, ..., n-2, n-1, n-3, ..., 3, 1.
StrategyTable round_robin(std::size_t n) {
  StrategyTable t{n, StrategyKind::ME, {}};
  std::vector<std::size_t> ring;
  for (std::size_t p = 2; p < n; p += 2) ring.push_back(p);
  for (std::size_t p = n - 1; p >= 1; p -= 2) {
    ring.push_back(p);
    if (p < 2) break;
  }
  std::vector<std::size_t> at(n);  // at[position] = index
  for (std::size_t p = 0; p < n; ++p) at[p] = p;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<IndexPair> step;
    for (std::size_t l = 0; l < n / 2; ++l) step.push_back(ordered(at[2 * l], at[2 * l + 1]));
    t.steps.push_back(std::move(step));
    // advance every ring occupant by one ring position
    const std::size_t last = at[ring.back()];
    for (std::size_t r = ring.size() - 1; r > 0; --r) at[ring[r]] = at[ring[r - 1]];
    at[ring[0]] = last;
  }
  return t;
}

// Step k pairs i, j with i + j = k (mod n); the two self-paired indices of an
// even step are paired with each other.
StrategyTable modulus(std::size_t n) {
  StrategyTable t{n, StrategyKind::MM, {}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<IndexPair> step;
    std::vector<std::size_t> self;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (k + n - i) % n;
      if (i < j) step.emplace_back(i, j);
      if (i == j) self.push_back(i);
    }
    if (self.size() == 2) step.emplace_back(self[0], self[1]);
    std::sort(step.begin(), step.end());
    t.steps.push_back(std::move(step));
  }
  return t;
}

}  // namespace

StrategyTable gen_table(StrategyKind kind, std::size_t n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorKind::Usage, "strategy order must be even and >= 2");
  return kind == StrategyKind::ME ? round_robin(n) : modulus(n);
}

TableReport validate_table(const StrategyTable& t) {
  const std::size_t n = t.order;
  TableReport rep{};
  rep.disjoint_ok = true;
  std::vector<std::size_t> seen(n * n, 0);
  for (const auto& step : t.steps) {
    std::vector<char> used(n, 0);
    for (auto [i, j] : step) {
      if (i >= n || j >= n || i == j || used[i] || used[j]) {
        rep.disjoint_ok = false;
        continue;
      }
      used[i] = used[j] = 1;
      ++seen[std::min(i, j) * n + std::max(i, j)];
    }
    if (step.size() != n / 2) rep.disjoint_ok = false;
  }
  rep.coverage_ok = true;
  bool once = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (seen[i * n + j] == 0) rep.coverage_ok = false;
      if (seen[i * n + j] != 1) once = false;
    }
  rep.cyclic = rep.coverage_ok && once && t.steps.size() + 1 == n;
  return rep;
}

CommMapping comm_mapping(const StrategyTable& t) {
  CommMapping m;
  const std::size_t s = t.steps.size();
  for (std::size_t k = 0; k < s; ++k) {
    const auto& now = t.steps[k];
    const auto& next = t.steps[(k + 1) % s];
    std::vector<Route> routes;
    for (const auto& [p, q] : now) {
      Route r{p, q, 0, 0};
      for (std::size_t l = 0; l < next.size(); ++l) {
        const long enc = static_cast<long>(l) + 1;
        if (next[l].first == p) r.t0 = -enc;
        if (next[l].second == p) r.t0 = enc;
        if (next[l].first == q) r.t1 = -enc;
        if (next[l].second == q) r.t1 = enc;
      }
      routes.push_back(r);
    }
    m.routes.push_back(std::move(routes));
  }
  return m;
}

std::string dump_table(const StrategyTable& t) {
  std::ostringstream os;
  for (const auto& step : t.steps) {
    for (std::size_t l = 0; l < step.size(); ++l)
      os << (l ? " " : "") << step[l].first << '-' << step[l].second;
    os << '\n';
  }
  return os.str();
}

std::string dump_mapping(const CommMapping& m) {
  std::ostringstream os;
  for (std::size_t k = 0; k < m.routes.size(); ++k)
    for (std::size_t r = 0; r < m.routes[k].size(); ++r) {
      const auto& x = m.routes[k][r];
      os << "step=" << k << " rank=" << r << " stripes=" << x.p << '-' << x.q << " t0=" << x.t0
         << " t1=" << x.t1 << '\n';
    }
  return os.str();
}

}  // namespace hzg
