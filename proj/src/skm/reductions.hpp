#pragma once

#include <optional>

#include "local_search.hpp"
#include "oracle.hpp"

namespace skm {

// ---- grid tiling ----

struct GridTilingInstance {
  int n = 1, k = 1;
  // cell (i, j), 1-based, -> nonempty sorted list of pairs (a, b) in [n] x [n]
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> sets;
  void validate() const;
};

using GridSelection = std::map<std::pair<int, int>, std::pair<int, int>>;

// Exhaustive backtracking; returns the lexicographically first selection
// satisfying both monotonicity constraints, or nullopt. Budget counts visited
// partial assignments.
std::optional<GridSelection> solve_grid_tiling(const GridTilingInstance& gt,
                                               unsigned long long budget = 10000000ULL);

struct GridReductionSpec {
  GridTilingInstance gt;
  Rat eps;      // lattice spacing, 1/eps must be a positive integer
  Int inv_eps;  // derived
  Int width;    // lattice points per axis: 2k/eps + n
  Int sigma;    // width^2
  void validate_and_derive();
};

// Euclidean k^2-median with penalties: the full eps-lattice over the square of
// side 2k + eps(n-1), penalty 1 per point, candidate centres C_{i,j}.
Instance build_grid_instance(const GridReductionSpec& spec);
// No-penalty cylinder-metric variant: lattice lifted to height 0, sentinel
// centres at height 1 with Sigma-multiplicity co-located data piles, 3k^2
// centres to open.
Instance build_cylinder_instance(const GridReductionSpec& spec);

struct ReductionCertificate {
  std::string variant;
  bool source_solvable = false;
  std::string threshold;           // exact cost string (nu, or the tau_s table)
  std::string clustering_optimum;  // exact cost string
  bool equivalent = false;
  std::vector<std::string> detail;
};

ReductionCertificate certify_grid_equivalence(const GridReductionSpec& spec,
                                              unsigned long long budget = 10000000ULL,
                                              bool cylinder_variant = false);

// ---- moment-curve / PVC ----

struct PvcGraph {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // 1-based, each sorted, list sorted, simple
  int k = 1;
  int s = 0;
  void validate() const;
  int coverage(const std::vector<int>& vertices) const;
};

PvcGraph parse_graph(const std::string& text);

struct PvcSolveResult {
  int best_coverage = 0;
  std::vector<std::vector<int>> covers;  // all k-sets achieving best_coverage
};

PvcSolveResult solve_pvc(const PvcGraph& g, unsigned long long budget = 10000000ULL);

struct SphereFit {
  int dim = 3;                // ambient dimension (3 or 4)
  std::vector<Rat> t_values;  // 3D: tangency {t1, t2}; 4D: {t0 pass-through, t1, t2 tangency}
  std::vector<Rat> centre;    // a, b, c [, d]
  Rat radius_sq;
};

// Closed-form centre of the 2-sphere tangent to the moment curve (t, t^2, t^3)
// at t1 and t2. Residuals of the defining system vanish identically.
SphereFit fit_sphere_3d(const Rat& t1, const Rat& t2);
// 3-sphere through `through` (at nominal curve parameter t0) and tangent to
// (t, t^2, t^3, t^4) at t1, t2. Uses the closed form for the canonical
// through-point (1,1,1,1); otherwise solves the linear system exactly.
SphereFit fit_sphere_4d(const Rat& t0, const Rat& t1, const Rat& t2, const Point& through);

// f(t) = |curve(t) - centre|^2 - r^2, exact.
Rat sphere_clearance_value(const SphereFit& fit, const Rat& t);
Rat sphere_tangency_residual(const SphereFit& fit, const Rat& t);  // f'(t)

struct ClearanceReport {
  bool all_positive = true;
  std::vector<Rat> failing_ts;
  unsigned long long checked = 0;
};

ClearanceReport sphere_curve_clearance(const SphereFit& fit, const std::vector<Rat>& t_grid);
// Step-1/16 grid over the lemma intervals plus all half-integers <= n+1,
// excluding the fit's own parameters.
std::vector<Rat> canonical_clearance_grid(const SphereFit& fit, int n);

struct PvcInstance {
  Instance inst;
  Rat r_q_sq;
  std::pair<int, int> q_edge;
  int vertex_centre_base = 0;  // centre id of vertex t is base + t - 1
  int z_star_id = -1;          // pvc6 only
  int num_edges = 0;

  RadicalSum r_q() const;
  RadicalSum eps() const;        // sqrt((r_q^2 + 1/4)/r_q^2) - 1
  RadicalSum eps_prime() const;  // eps / 2m
  RadicalSum one_plus_eps_prime() const;
  // r_q (m + (m - coverage) eps) = coverage*r_q + (m-coverage)*sqrt(r_q^2+1/4)
  RadicalSum cost_formula(int coverage) const;
  std::vector<int> vertex_centres(const std::vector<int>& vertices) const;
  std::vector<int> centre_vertices(const std::vector<int>& centre_ids) const;  // drops z*
};

// Penalty k-median in R^4 on the 3-dimensional moment curve (Thm-1.5-style).
PvcInstance build_pvc4_instance(const PvcGraph& g);
// No-penalty (k+1)-median in R^6 with the shifted 4-dimensional moment curve
// and the z~* centre carrying ceil(m r_q) co-located points (Thm-1.6-style).
PvcInstance build_pvc6_instance(const PvcGraph& g);

ReductionCertificate certify_pvc_equivalence(const PvcGraph& g, int variant,
                                             unsigned long long budget = 10000000ULL);

// ---- measure approximation (Lemma-4.2-style sandwich) ----

struct MeasureReport {
  Rat r, eps;
  unsigned long long lattice_count = 0;
  double sum_dist = 0;      // sum of |y - a| over lattice points in D_r
  double count_lower = 0;   // pi (r-eps)^2 / eps^2 (clamped at 0)
  double count_upper = 0;   // pi (r+eps)^2 / eps^2
  double dist_upper = 0;    // ((2/3) pi (r+eps)^3 + eps pi (r+eps)^2) / eps^2
  bool count_ok = false;
  bool dist_ok = false;
  bool ok() const { return count_ok && dist_ok; }
};

// Exact lattice enumeration against the closed forms pi r^2 and (2/3) pi r^3,
// 1e-9 absolute tolerance on the transcendental side. The centre must sit on
// the lattice and the disc of radius r + eps inside the lattice region.
MeasureReport measure_approx_check(const Point& a, const Rat& r, const Rat& eps);

}  // namespace skm
