#pragma once

#include <functional>
#include <optional>

#include "instance.hpp"

namespace skm {

struct SearchConfig {
  int rho = 2;
  std::optional<unsigned long long> max_iters;
  Rat epsilon = Rat(1, 10);  // analysis parameter, used by nearly-good diagnostics
  std::vector<int> pin_centres;
  std::optional<std::vector<int>> seed_solution;
  bool force = false;
  unsigned long long neighbor_budget = 100000000ULL;
};

struct TraceStep {
  unsigned long long iter = 0;
  std::vector<int> swapped_in, swapped_out;  // empty on the seed step
  std::vector<int> solution;                 // sorted
  RadicalSum cost;
};

enum class StopReason { local_opt, max_iters };

struct SearchTrace {
  std::vector<TraceStep> steps;  // steps[0] is the seed
  StopReason terminated_reason = StopReason::local_opt;
  double log_bound = 0;                 // 2k ln(n * Delta)
  unsigned long long bound_floor = 0;   // floor of the above, 0 when degenerate
};

// Best-improvement rho-swap local search. Each iteration moves to the
// cheapest neighbour within rho swaps that keeps the pins; cost ties break
// lexicographically on (sorted swapped-in ids, sorted swapped-out ids).
std::pair<Solution, SearchTrace> rho_swap_search(const Instance& inst, const SearchConfig& cfg);
// Penalty variant via the lifted instance: the dummy centre is pinned so the
// search only considers swaps that keep it open.
std::pair<Solution, SearchTrace> rho_swap_search(const AugmentedInstance& aug, SearchConfig cfg);

struct NearlyGoodResult {
  bool nearly_good = true;
  std::optional<std::vector<int>> violating_optimum;
};

// cost(S) <= cost(F) + 2 eps Psi(S,F) for every supplied optimum F; the
// penalized forms are used automatically on penalty instances.
NearlyGoodResult is_nearly_good(const Instance& inst, const std::vector<int>& S,
                                const std::vector<std::vector<int>>& optima, const Rat& eps);

// Searches the rho-neighbourhood of S for S' with
//   cost(S') <= cost(S) + (cost(O) - cost(S) + eps Psi(S,O)) / k.
// Returns the first qualifying neighbour in tie-break order, or nullopt when
// the premise cost(S) > cost(O) + eps Psi(S,O) fails or no neighbour qualifies.
std::optional<std::vector<int>> cost_drop_witness(const Instance& inst, const std::vector<int>& S,
                                                  const std::vector<int>& O, const Rat& eps,
                                                  int rho);

// Number of candidate neighbours of one iteration (refused above the budget).
unsigned long long neighborhood_size(int k, int num_centres, int rho, int pinned);

// Visits every sorted index combination of size t from [0, n).
void for_each_combination(size_t n, size_t t, const std::function<bool(const std::vector<size_t>&)>& fn);

}  // namespace skm
