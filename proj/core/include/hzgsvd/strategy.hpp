// Parallel pivot orderings: round-robin tournament (ME, cyclic) and the
// modulus schedule (MM, quasi-cyclic), plus the stripe routing between steps.
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace hzg {

enum class StrategyKind { ME, MM };

StrategyKind parse_strategy_kind(const std::string& s);
const char* to_string(StrategyKind k);

using IndexPair = std::pair<std::size_t, std::size_t>;

struct StrategyTable {
  std::size_t order = 0;
  StrategyKind kind = StrategyKind::ME;
  std::vector<std::vector<IndexPair>> steps;
};

StrategyTable gen_table(StrategyKind kind, std::size_t n);

struct TableReport {
  bool cyclic = false;
  bool coverage_ok = false;
  bool disjoint_ok = false;
};

TableReport validate_table(const StrategyTable& t);

// Destinations are encoded as -(rank+1) for the first slot and +(rank+1) for
// the second slot of the receiving holder.
struct Route {
  std::size_t p = 0;
  std::size_t q = 0;
  long t0 = 0;
  long t1 = 0;
};

struct CommMapping {
  // routes[k][r]: what holder r does after step k.
  std::vector<std::vector<Route>> routes;
};

CommMapping comm_mapping(const StrategyTable& t);

inline std::size_t decode_rank(long t) { return static_cast<std::size_t>((t < 0 ? -t : t) - 1); }
inline bool decode_second_slot(long t) { return t > 0; }

// One step per line, pairs as "i-j".
std::string dump_table(const StrategyTable& t);
std::string dump_mapping(const CommMapping& m);

}  // namespace hzg
