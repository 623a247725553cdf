#pragma once

#include <map>

#include "instance.hpp"

namespace skm {

struct OptimaSet {
  RadicalSum optimal_cost;
  std::vector<std::vector<int>> solutions;  // sorted sets, colex order
  bool enumeration_complete = true;

  bool contains(const std::vector<int>& s) const;
};

// Exhaustive enumeration of all k-subsets (those containing `pins`), exact
// comparisons, all minimizers returned. Budget counts subset evaluations.
OptimaSet solve_exact(const Instance& inst, unsigned long long budget = 10000000ULL,
                      int jobs = 1, const std::vector<int>& pins = {});
OptimaSet solve_exact(const AugmentedInstance& aug, unsigned long long budget = 10000000ULL,
                      int jobs = 1);

struct CostDropReport {
  unsigned long long feasible_solutions = 0;
  unsigned long long premise_pairs = 0;
  unsigned long long verified_pairs = 0;
  // pairs where no neighbour within |S \ O| swaps met the bound
  std::vector<std::pair<std::vector<int>, std::vector<int>>> counterexamples;
  std::map<int, unsigned long long> min_rho_histogram;
  int max_min_rho = 0;
  bool ok() const { return counterexamples.empty(); }
};

// For every ordered pair (S, O) of feasible solutions with
// cost(S) > cost(O) + eps Psi(S, O), finds the minimal swap size at which a
// neighbour S' satisfies cost(S') <= cost(S) + (cost(O) - cost(S) + eps Psi)/k,
// searching up to |S \ O| swaps. Penalized costs and Psi_pen on penalty
// instances.
CostDropReport verify_cost_drop_theorem(const Instance& inst, const Rat& eps,
                                        unsigned long long budget = 10000000ULL);

struct NearlyGoodCertReport {
  unsigned long long feasible_solutions = 0;
  unsigned long long nearly_good_count = 0;
  std::vector<std::vector<int>> violations;  // nearly-good but not optimal
  bool ok() const { return violations.empty(); }
};

// Checks that every nearly-good S (against the full optima set, at eps) is
// itself optimal. Violations are diagnostics on unstable instances.
NearlyGoodCertReport certify_nearly_good_implies_optimal(const Instance& inst, const Rat& eps,
                                                         unsigned long long budget = 10000000ULL);

// All k-subsets of the instance's centre ids, colex order over sorted sets.
std::vector<std::vector<int>> enumerate_feasible(const Instance& inst,
                                                 unsigned long long budget,
                                                 const std::vector<int>& pins = {});

unsigned long long binomial_capped(unsigned long long n, unsigned long long r,
                                   unsigned long long cap);

}  // namespace skm
