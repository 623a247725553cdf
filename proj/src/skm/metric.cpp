#include "metric.hpp"

#include <algorithm>

namespace skm {

void Point::normalize_lift() {
  if (lift_axis < 0) return;
  Rat root;
  if (is_perfect_square(lift_sq, &root)) {
    coords.at(lift_axis) = root;
    lift_axis = -1;
    lift_sq = 0;
  } else {
    coords.at(lift_axis) = 0;
  }
}

std::string metric_kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::explicit_matrix: return "explicit";
    case MetricKind::cylinder_max: return "cylinder_max";
  }
  return "?";
}

MetricKind metric_kind_from_name(const std::string& s) {
  if (s == "euclidean") return MetricKind::euclidean;
  if (s == "explicit") return MetricKind::explicit_matrix;
  if (s == "cylinder_max") return MetricKind::cylinder_max;
  fail(Errc::parse, "unknown metric kind '" + s + "'");
}

bool Metric::has_entry(int a, int b) const {
  if (a == b) return true;
  return entries.count({std::min(a, b), std::max(a, b)}) > 0;
}

const Scalar& Metric::entry(int a, int b) const {
  static const Scalar zero = Scalar::rational(Rat(0));
  if (a == b) return zero;
  auto it = entries.find({std::min(a, b), std::max(a, b)});
  if (it == entries.end())
    fail(Errc::missing_entry,
         "explicit metric has no entry for node pair (" + std::to_string(a) + "," +
             std::to_string(b) + ")");
  return it->second;
}

namespace {

void check_dims(const Point& a, const Point& b) {
  if (a.dim() != b.dim())
    fail(Errc::invalid_argument, "dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                     std::to_string(b.dim()));
}

// (x - y)^2 for one axis; exact or fails. Cross terms between two distinct
// irrational axis values only resolve when their product is a perfect square.
Rat axis_diff_sq(const Scalar& x, const Scalar& y) {
  if (x.is_rational() && y.is_rational()) {
    Rat d = x.v - y.v;
    return Rat(d * d);
  }
  Rat prod_sq = x.square() * y.square();
  Rat root;
  if (!is_perfect_square(prod_sq, &root))
    fail(Errc::numeric, "irrational cross term in squared distance");
  return Rat(x.square() + y.square() - 2 * root);
}

Rat euclid_sq(const Point& a, const Point& b) {
  check_dims(a, b);
  Rat s = 0;
  for (size_t i = 0; i < a.dim(); ++i) {
    bool plain = (static_cast<int>(i) != a.lift_axis) && (static_cast<int>(i) != b.lift_axis);
    if (plain) {
      Rat d = a.coords[i] - b.coords[i];
      s += d * d;
    } else {
      s += axis_diff_sq(a.coord_value(i), b.coord_value(i));
    }
  }
  s.canonicalize();
  return s;
}

Rat cylinder_sq(const Point& a, const Point& b) {
  check_dims(a, b);
  if (a.dim() != 3) fail(Errc::invalid_argument, "cylinder_max metric needs dimension 3");
  if (a.lift_axis >= 0 || b.lift_axis >= 0)
    fail(Errc::invalid_argument, "cylinder_max metric does not support lifted coordinates");
  Rat dx = a.coords[0] - b.coords[0];
  Rat dy = a.coords[1] - b.coords[1];
  Rat dz = a.coords[2] - b.coords[2];
  Rat planar = dx * dx + dy * dy;
  Rat vert = dz * dz;
  Rat s = planar >= vert ? planar : vert;
  s.canonicalize();
  return s;
}

}  // namespace

Rat squared_distance(const Metric& m, const Point& a, const Point& b) {
  switch (m.kind) {
    case MetricKind::euclidean: return euclid_sq(a, b);
    case MetricKind::cylinder_max: return cylinder_sq(a, b);
    case MetricKind::explicit_matrix: return m.entry(a.id, b.id).square();
  }
  fail(Errc::invalid_argument, "bad metric kind");
}

Scalar distance(const Metric& m, const Point& a, const Point& b) {
  if (m.kind == MetricKind::explicit_matrix) return m.entry(a.id, b.id);
  return Scalar::sqrt_of(squared_distance(m, a, b));
}

namespace {

// Exact test of sqrt(A) <= sqrt(B) + sqrt(C) over rational squares.
bool triangle_holds(const Rat& A, const Rat& B, const Rat& C) {
  Rat t = A - B - C;
  if (t <= 0) return true;
  return Rat(t * t) <= Rat(4 * B * C);
}

}  // namespace

std::vector<MetricIssue> validate_metric(const Metric& m, const std::vector<Point>& pts,
                                         bool force_large) {
  std::vector<MetricIssue> issues;
  if (m.kind == MetricKind::explicit_matrix) {
    for (const auto& [key, val] : m.entries) {
      if (key.first == key.second && !val.is_zero())
        issues.push_back({MetricIssue::identity, key.first, key.second, -1,
                          "diagonal entry nonzero: " + val.str()});
      if (key.first > key.second)
        issues.push_back({MetricIssue::symmetry, key.first, key.second, -1, "unsorted key"});
    }
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j)
        if (!m.has_entry(pts[i].id, pts[j].id))
          issues.push_back(
              {MetricIssue::missing, pts[i].id, pts[j].id, -1, "missing matrix entry"});
  }
  bool do_triangle = pts.size() <= 200 || force_large;
  if (do_triangle) {
    for (size_t i = 0; i < pts.size(); ++i) {
      for (size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        for (size_t l = j + 1; l < pts.size(); ++l) {
          if (l == i) continue;
          if (m.kind == MetricKind::explicit_matrix &&
              (!m.has_entry(pts[j].id, pts[l].id) || !m.has_entry(pts[j].id, pts[i].id) ||
               !m.has_entry(pts[i].id, pts[l].id)))
            continue;
          Rat A = squared_distance(m, pts[j], pts[l]);
          Rat B = squared_distance(m, pts[j], pts[i]);
          Rat C = squared_distance(m, pts[i], pts[l]);
          if (!triangle_holds(A, B, C))
            issues.push_back({MetricIssue::triangle, pts[j].id, pts[i].id, pts[l].id,
                              "d(a,c) > d(a,b) + d(b,c)"});
        }
      }
    }
  }
  return issues;
}

bool doubling_ball_cover_check(const Metric& m, const Point& centre, const Scalar& r,
                               const std::vector<Point>& candidate_centres,
                               const std::vector<Point>& sample) {
  if (m.kind == MetricKind::cylinder_max && candidate_centres.size() > 8)
    fail(Errc::invalid_argument, "cylinder_max cover check expects at most 8 candidate centres");
  Scalar half = r.scaled(Rat(1, 2));
  for (const Point& s : sample) {
    if (distance(m, centre, s) > r) continue;
    bool covered = false;
    for (const Point& c : candidate_centres) {
      if (distance(m, c, s) <= half) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace skm
