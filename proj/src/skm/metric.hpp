#pragma once

#include <map>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace skm {

// One coordinate axis may hold an irrational value sqrt(lift_sq); the
// reductions store lifted coordinates that way so squared point-to-centre
// distances stay rational.
struct Point {
  int id = 0;
  unsigned long long multiplicity = 1;
  std::vector<Rat> coords;
  int lift_axis = -1;
  Rat lift_sq = 0;

  Scalar coord_value(size_t axis) const {
    if (static_cast<int>(axis) == lift_axis) return Scalar::sqrt_of(lift_sq);
    return Scalar::rational(coords.at(axis));
  }
  size_t dim() const { return coords.size(); }
  void normalize_lift();  // folds perfect-square lifts into plain coords
};

enum class MetricKind { euclidean, explicit_matrix, cylinder_max };

std::string metric_kind_name(MetricKind k);
MetricKind metric_kind_from_name(const std::string& s);

struct Metric {
  MetricKind kind = MetricKind::euclidean;
  // explicit_matrix only: distances keyed on sorted node-id pairs. A point and
  // a centre sharing an id denote the same node of V.
  std::map<std::pair<int, int>, Scalar> entries;
  // Lifted and perturbed tables are exempt from triangle validation.
  bool skip_triangle = false;

  bool has_entry(int a, int b) const;
  const Scalar& entry(int a, int b) const;
};

Rat squared_distance(const Metric& m, const Point& a, const Point& b);
Scalar distance(const Metric& m, const Point& a, const Point& b);

struct MetricIssue {
  enum Kind { identity, symmetry, triangle, negative, missing } kind;
  int a = -1, b = -1, c = -1;
  std::string detail;
};

// Reports every violated axiom over the given points. Triangle checking is
// O(n^3) and skipped for n > 200 unless force_large is set.
std::vector<MetricIssue> validate_metric(const Metric& m, const std::vector<Point>& pts,
                                         bool force_large = false);

// Empirical witness check: every sample point within r of centre must lie
// within r/2 of some candidate centre. Not a proof of the doubling property.
bool doubling_ball_cover_check(const Metric& m, const Point& centre, const Scalar& r,
                               const std::vector<Point>& candidate_centres,
                               const std::vector<Point>& sample);

}  // namespace skm
