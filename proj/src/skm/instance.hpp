#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "metric.hpp"

namespace skm {

enum class Objective { kmeans, kmedian };

std::string objective_name(Objective o);
Objective objective_from_name(const std::string& s);

constexpr int kPenaltyAssignment = -1;

struct Instance {
  Objective objective = Objective::kmedian;
  int k = 1;
  std::vector<Point> points;
  std::vector<Point> centres;
  Metric metric;
  bool has_penalties = false;
  std::map<int, Scalar> penalties;  // point id -> p(j), total when present
  std::vector<int> centre_order;    // tie-breaking permutation of centre ids
  std::vector<std::pair<std::string, std::string>> provenance;

  // Validates all invariants and builds the distance cache. Must be called
  // before any cost evaluation; io and the generators call it for you.
  void finalize();

  int power() const { return objective == Objective::kmeans ? 2 : 1; }
  const Point& point_by_id(int id) const;
  const Point& centre_by_id(int id) const;
  size_t point_index(int id) const;
  size_t centre_index(int id) const;
  int centre_rank(int id) const;  // position in centre_order
  bool finalized() const { return finalized_; }

  const Scalar& dist_pc(size_t point_idx, size_t centre_idx) const {
    return dist_[point_idx][centre_idx];
  }
  // delta(j, i)^power as a Scalar (rational for k-means, radical for k-median)
  const Scalar& assign_cost(size_t point_idx, size_t centre_idx) const {
    return cost_[point_idx][centre_idx];
  }
  Scalar dist_cc(int centre_id1, int centre_id2) const;
  const Scalar& penalty_of(int point_id) const;

  unsigned long long total_weight() const;  // sum of multiplicities
  Rat max_sqdist() const;                   // Delta = max over X x C of delta^2

private:
  bool finalized_ = false;
  std::unordered_map<int, size_t> point_pos_, centre_pos_;
  std::unordered_map<int, int> centre_rank_;
  std::vector<std::vector<Scalar>> dist_;  // points x centres
  std::vector<std::vector<Scalar>> cost_;
};

struct Solution {
  std::vector<int> centres;             // sorted ids, |centres| = k
  std::map<int, int> assignment;        // point id -> centre id, or kPenaltyAssignment
  std::map<int, Scalar> per_point;      // cost contribution per single copy
  RadicalSum cost;                      // sum of multiplicity * per_point
};

// Centre of S nearest to point j; ties broken by centre_order (smallest rank).
int nearest_centre(const Instance& inst, int point_id, const std::vector<int>& S);

// Full evaluation with assignments and penalty opt-outs. Requires |S| = k.
Solution solution_cost(const Instance& inst, const std::vector<int>& S);
// Cost only; used on enumeration hot paths. No size-k requirement.
RadicalSum cost_of(const Instance& inst, const std::vector<int>& S);

struct AugmentedInstance {
  Instance base;
  int dummy_id = -1;
  // Lifted centres carry fresh node ids (base id + centre_offset) so that the
  // dummy-centre rules delta(z*, j)^power = p(j) and delta(z*, c) = 0 never
  // collide when a location serves as both data point and candidate centre.
  int centre_offset = 0;
  Instance lifted;  // no penalties, k+1, explicit table, triangle skipped

  int lifted_centre_id(int base_centre_id) const { return base_centre_id + centre_offset; }
  int base_centre_id(int lifted_id) const { return lifted_id - centre_offset; }
  // strips z* and maps the rest back to base centre ids
  std::vector<int> restrict_to_base(const std::vector<int>& lifted_solution) const;
};

AugmentedInstance lift_penalties(const Instance& inst);

// Psi(S, O) over X-bar (penalized=false) or X-bar^pen (penalized=true); the
// summand is delta(j, sigma(j,S))^power + delta(j, sigma(j,O))^power.
RadicalSum psi(const Instance& inst, const std::vector<int>& S, const std::vector<int>& O,
               bool penalized);

// X^1..X^4 of the penalty analysis. The paper's four predicates are completed
// to a genuine partition: points whose sigma(j,S) escapes O while only one of
// the two penalty guards binds are classed by their perturbed-cost behaviour
// (X^1-like when delta(j,S)^power < p, X^2-like otherwise).
std::array<std::vector<int>, 4> partition_x1_x4(const Instance& inst, const std::vector<int>& S,
                                                const std::vector<int>& O);

}  // namespace skm
