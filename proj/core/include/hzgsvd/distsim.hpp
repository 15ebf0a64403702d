// In-process simulation of the multi-process solver: each worker owns two
// column stripes, runs the blocked driver on them, and passes stripes on to
// the workers that need them for the next step through tagged messages.
#pragma once

#include <cstddef>
#include <vector>

#include "hzgsvd/blocked.hpp"
#include "hzgsvd/strategy.hpp"

namespace hzg {

struct StripeState {
  std::size_t rank = 0;
  std::size_t p = 0;  // global stripe in the first slot
  std::size_t q = 0;  // global stripe in the second slot
  std::size_t width = 0;
  Matrix F, G, Z;     // both stripes side by side; Z keeps all n rows
};

struct StripeMessage {
  int tag = 0;
  std::size_t source = 0;
  std::vector<double> payload;
};

std::vector<StripeState> partition_stripes(const ProblemPair& p, std::size_t s,
                                           const StrategyTable& outer, std::size_t w);

// Tag for one plane (Y in 0..2 for F, G, Z; imag selects the imaginary plane)
// headed for the first or second slot of its destination.
int stripe_tag(std::size_t y, bool imag, bool second_slot, bool complex);

// Sends every stripe of step k to its holder at step k+1 and installs the
// received stripes. `log`, when given, collects the messages in send order.
void exchange_step(std::vector<StripeState>& states, const StrategyTable& outer,
                   const CommMapping& m, std::size_t k, std::vector<StripeMessage>* log = nullptr);

struct DistributedOptions {
  std::size_t workers = 1;
  std::size_t inner_sweeps = 1;       // sweep cap of each per-worker driver call
  std::size_t max_outermost_sweeps = 30;
  std::size_t threads = 1;            // task pool running the workers
};

// Bordered input with n divisible by 2 * w * workers.
GsvdResult run_distributed(const ProblemPair& p, const SolverConfig& cfg,
                           const DistributedOptions& opt);

// Any input: bordering to a multiple of 2 * w * workers and unbordering.
GsvdResult solve_distributed(const ProblemPair& p, const SolverConfig& cfg,
                             const DistributedOptions& opt);

}  // namespace hzg
