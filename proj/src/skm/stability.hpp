#pragma once

#include <optional>

#include "oracle.hpp"

namespace skm {

// Entrywise multiplicative perturbation. Scales are keyed on sorted node-id
// pairs, which keeps delta' symmetric when a location serves as both a data
// point and a candidate centre. Absent keys mean factor 1.
struct Perturbation {
  Rat alpha = Rat(1);
  std::map<std::pair<int, int>, Rat> scale;            // factors in [1, alpha]
  std::optional<std::map<int, Rat>> penalty_scale;     // factors in [1, alpha^power]

  Rat factor(int a, int b) const;
  Rat penalty_factor(int point_id) const;
};

// Eq-style canonical perturbation of a solution S: pairs (j, sigma(j,S)) keep
// factor 1, every other point-centre pair is scaled by 1 + eps_prime; the
// penalty of j is scaled by (1+eps_prime)^power exactly when j connects below
// its penalty under S. Mirrored pairs of co-located point/centre nodes stay
// unscaled too, preserving symmetry.
Perturbation canonical_perturbation(const Instance& inst, const std::vector<int>& S,
                                    const Rat& eps_prime);

// Materializes the perturbed instance as an explicit-table metric (bounds are
// validated; the triangle inequality intentionally is not).
Instance apply_perturbation(const Instance& inst, const Perturbation& pert);

// Minimum of sum delta(s, f(s)) over bijections f between the two centre
// sets, in the instance's own (unperturbed) metric. Exact Hungarian algorithm
// over radical sums.
RadicalSum dist_bij(const Instance& inst, const std::vector<int>& S1,
                    const std::vector<int>& S2);

struct StabilityVerdict {
  Rat alpha;
  Rat beta;
  bool violated = false;
  unsigned long long trials_run = 0;
  RadicalSum max_dist;
  std::optional<Perturbation> witness_pert;
  std::optional<std::vector<int>> witness_perturbed_optimum;
  std::optional<std::vector<int>> witness_original_optimum;
};

// One-sided (alpha, beta)-stability falsifier: canonical perturbations of
// every feasible solution plus `random_trials` random scale maps with entries
// drawn from {1, alpha, uniform(1, alpha)}. A violation is a pair of an
// original optimum and a perturbed optimum with dist_bij > beta.
// no_violation_found is not a proof of stability.
StabilityVerdict falsify_stability(const Instance& inst, const Rat& alpha, const Rat& beta,
                                   unsigned long long random_trials, unsigned long long seed,
                                   unsigned long long oracle_budget = 10000000ULL, int jobs = 1);

struct FamilyCertificate {
  bool stable_on_family = true;
  unsigned long long perturbations_checked = 0;
  std::optional<std::vector<int>> witness_reference;  // S whose canonical perturbation failed
  std::optional<std::vector<int>> witness_optimum;    // perturbed optimum outside original set
};

// alpha-stability (beta = 0) over the canonical perturbation family: for the
// canonical perturbation of every feasible S, every perturbed optimum must be
// an original optimum. alpha may be irrational (a radical-sum value), which
// the PVC reductions need; evaluation stays exact either way.
FamilyCertificate certify_stable_family(const Instance& inst, const RadicalSum& alpha,
                                        unsigned long long oracle_budget = 10000000ULL);
FamilyCertificate certify_stable_family(const Instance& inst, const Rat& alpha,
                                        unsigned long long oracle_budget = 10000000ULL);

// Exact cost of T under the canonical perturbation anchored at S, without
// materializing the perturbed instance. Used by the family certifier.
RadicalSum perturbed_cost(const Instance& inst, const std::vector<int>& S,
                          const RadicalSum& alpha, const std::vector<int>& T);

}  // namespace skm
