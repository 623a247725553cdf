#include "reductions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace skm {

// ---- grid tiling ----

void GridTilingInstance::validate() const {
  if (n < 1 || k < 1) fail(Errc::invalid_argument, "grid tiling needs n, k >= 1");
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      auto it = sets.find({i, j});
      if (it == sets.end() || it->second.empty())
        fail(Errc::invalid_argument, "grid tiling set S_" + std::to_string(i) + "," +
                                         std::to_string(j) + " missing or empty");
      for (auto [a, b] : it->second)
        if (a < 1 || a > n || b < 1 || b > n)
          fail(Errc::invalid_argument, "grid tiling pair out of [n] x [n]");
    }
}

std::optional<GridSelection> solve_grid_tiling(const GridTilingInstance& gt,
                                               unsigned long long budget) {
  gt.validate();
  unsigned long long product = 1;
  for (const auto& [cell, opts] : gt.sets) {
    product *= opts.size();
    if (product > budget)
      fail(Errc::budget_exceeded, "grid tiling search space exceeds budget " +
                                      std::to_string(budget));
  }
  // cells in row-major order (i, j); constraints look back at (i-1, j), (i, j-1)
  std::vector<std::pair<int, int>> cells;
  for (int i = 1; i <= gt.k; ++i)
    for (int j = 1; j <= gt.k; ++j) cells.emplace_back(i, j);
  GridSelection sel;
  std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
    if (pos == cells.size()) return true;
    auto [i, j] = cells[pos];
    for (const auto& cand : gt.sets.at({i, j})) {
      if (i > 1 && sel.at({i - 1, j}).first > cand.first) continue;
      if (j > 1 && sel.at({i, j - 1}).second > cand.second) continue;
      sel[{i, j}] = cand;
      if (rec(pos + 1)) return true;
      sel.erase({i, j});
    }
    return false;
  };
  if (rec(0)) return sel;
  return std::nullopt;
}

void GridReductionSpec::validate_and_derive() {
  gt.validate();
  if (eps <= 0 || eps > 1) fail(Errc::invalid_argument, "grid eps must be in (0, 1]");
  Rat inv = 1 / eps;
  if (inv.get_den() != 1)
    fail(Errc::invalid_argument, "1/eps must be an integer so centres sit on the lattice");
  inv_eps = inv.get_num();
  if (Rat(eps * (gt.n - 1)) >= 2)
    fail(Errc::invalid_argument, "eps (n-1) must stay below the cell pitch 2");
  width = Int(2 * gt.k) * inv_eps + gt.n;  // 2k/eps + n points per axis
  sigma = width * width;
}

namespace {

long lattice_id(const Int& width, long u, long v) {
  return mpz_get_si(Int(Int(v) * width + u).get_mpz_t());
}

void append_grid_provenance(Instance& inst, const GridReductionSpec& spec, const char* source) {
  inst.provenance.emplace_back("source", source);
  inst.provenance.emplace_back("n", std::to_string(spec.gt.n));
  inst.provenance.emplace_back("k", std::to_string(spec.gt.k));
  inst.provenance.emplace_back("eps", rat_to_string(spec.eps));
  inst.provenance.emplace_back("sigma", spec.sigma.get_str());
  for (const auto& [cell, opts] : spec.gt.sets) {
    std::ostringstream os;
    os << cell.first << " " << cell.second << " :";
    for (auto [a, b] : opts) os << " " << a << "," << b;
    inst.provenance.emplace_back("set", os.str());
  }
}

std::vector<Point> grid_lattice_points(const GridReductionSpec& spec, bool lifted) {
  long w = mpz_get_si(spec.width.get_mpz_t());
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(w) * w);
  for (long v = 0; v < w; ++v)
    for (long u = 0; u < w; ++u) {
      Point p;
      p.id = lattice_id(spec.width, u, v);
      p.coords = {Rat(u) * spec.eps, Rat(v) * spec.eps};
      if (lifted) p.coords.push_back(0);
      pts.push_back(std::move(p));
    }
  return pts;
}

// lattice index of the candidate centre for cell (i, j) and pair (a, b)
std::pair<long, long> centre_lattice_index(const GridReductionSpec& spec, int i, int j, int a,
                                           int b) {
  long q = mpz_get_si(spec.inv_eps.get_mpz_t());
  return {(2 * i - 1) * q + a - 1, (2 * j - 1) * q + b - 1};
}

}  // namespace

Instance build_grid_instance(const GridReductionSpec& spec_in) {
  GridReductionSpec spec = spec_in;
  spec.validate_and_derive();
  Instance inst;
  inst.objective = Objective::kmedian;
  inst.k = spec.gt.k * spec.gt.k;
  inst.metric.kind = MetricKind::euclidean;
  inst.points = grid_lattice_points(spec, false);
  inst.has_penalties = true;
  for (const Point& p : inst.points) inst.penalties[p.id] = Scalar::rational(Rat(1));
  std::set<long> centre_ids;
  for (const auto& [cell, opts] : spec.gt.sets)
    for (auto [a, b] : opts) {
      auto [u, v] = centre_lattice_index(spec, cell.first, cell.second, a, b);
      long id = lattice_id(spec.width, u, v);
      if (!centre_ids.insert(id).second)
        fail(Errc::invalid_argument, "candidate centres of two cells collide");
      Point c;
      c.id = static_cast<int>(id);
      c.coords = {Rat(u) * spec.eps, Rat(v) * spec.eps};
      inst.centres.push_back(std::move(c));
    }
  std::sort(inst.centres.begin(), inst.centres.end(),
            [](const Point& x, const Point& y) { return x.id < y.id; });
  append_grid_provenance(inst, spec, "grid");
  inst.finalize();
  return inst;
}

Instance build_cylinder_instance(const GridReductionSpec& spec_in) {
  GridReductionSpec spec = spec_in;
  spec.validate_and_derive();
  Instance inst;
  inst.objective = Objective::kmedian;
  inst.k = 3 * spec.gt.k * spec.gt.k;
  inst.metric.kind = MetricKind::cylinder_max;
  inst.points = grid_lattice_points(spec, true);
  long sigma = mpz_get_si(spec.sigma.get_mpz_t());
  int next_id = static_cast<int>(sigma);
  std::vector<Point> sentinels;
  for (int i = 1; i <= spec.gt.k; ++i)
    for (int j = 1; j <= spec.gt.k; ++j) {
      for (const auto& pos : {std::pair<Rat, Rat>{Rat(2 * i - 1), Rat(2 * j)},
                              std::pair<Rat, Rat>{Rat(2 * i), Rat(2 * j - 1)}}) {
        Point pile;
        pile.id = next_id++;
        pile.multiplicity = static_cast<unsigned long long>(sigma);
        pile.coords = {pos.first, pos.second, Rat(1)};
        inst.points.push_back(pile);
        sentinels.push_back(pile);
      }
    }
  // candidate centres: the grid candidates at height 0, plus the sentinels
  std::set<long> centre_ids;
  for (const auto& [cell, opts] : spec.gt.sets)
    for (auto [a, b] : opts) {
      auto [u, v] = centre_lattice_index(spec, cell.first, cell.second, a, b);
      long id = lattice_id(spec.width, u, v);
      if (!centre_ids.insert(id).second)
        fail(Errc::invalid_argument, "candidate centres of two cells collide");
      Point c;
      c.id = static_cast<int>(id);
      c.coords = {Rat(u) * spec.eps, Rat(v) * spec.eps, Rat(0)};
      inst.centres.push_back(std::move(c));
    }
  for (const Point& pile : sentinels) {
    Point sc;
    sc.id = pile.id;
    sc.coords = pile.coords;
    inst.centres.push_back(std::move(sc));
  }
  std::sort(inst.centres.begin(), inst.centres.end(),
            [](const Point& x, const Point& y) { return x.id < y.id; });
  append_grid_provenance(inst, spec, "cylinder");
  inst.finalize();
  return inst;
}

// ---- pvc ----

void PvcGraph::validate() const {
  if (n_vertices < 1) fail(Errc::invalid_argument, "graph needs at least one vertex");
  if (k < 1 || k > n_vertices) fail(Errc::invalid_argument, "pvc k out of range");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u == v) fail(Errc::invalid_argument, "self-loop in graph");
    if (u < 1 || v < 1 || u > n_vertices || v > n_vertices)
      fail(Errc::invalid_argument, "edge endpoint out of range");
    if (u > v) fail(Errc::invalid_argument, "edges must be stored sorted");
    if (!seen.insert({u, v}).second) fail(Errc::invalid_argument, "duplicate edge");
  }
}

int PvcGraph::coverage(const std::vector<int>& vertices) const {
  std::set<int> vs(vertices.begin(), vertices.end());
  int c = 0;
  for (auto [u, v] : edges)
    if (vs.count(u) || vs.count(v)) ++c;
  return c;
}

PvcSolveResult solve_pvc(const PvcGraph& g, unsigned long long budget) {
  g.validate();
  unsigned long long count = binomial_capped(g.n_vertices, g.k, budget);
  if (count > budget)
    fail(Errc::budget_exceeded, "pvc enumeration exceeds budget " + std::to_string(budget));
  PvcSolveResult res;
  res.best_coverage = -1;
  for_each_combination(g.n_vertices, g.k, [&](const std::vector<size_t>& idx) {
    std::vector<int> vs;
    vs.reserve(g.k);
    for (size_t i : idx) vs.push_back(static_cast<int>(i) + 1);
    int c = g.coverage(vs);
    if (c > res.best_coverage) {
      res.best_coverage = c;
      res.covers = {vs};
    } else if (c == res.best_coverage) {
      res.covers.push_back(vs);
    }
    return true;
  });
  return res;
}

// ---- sphere fits ----

namespace {

Rat poly_f(const std::vector<Rat>& centre, const Rat& t) {
  Rat acc = 0;
  Rat power = t;
  for (const Rat& c : centre) {
    Rat d = power - c;
    acc += d * d;
    power *= t;
  }
  acc.canonicalize();
  return acc;
}

Rat poly_fprime(const std::vector<Rat>& centre, const Rat& t) {
  // d/dt sum_e (t^e - c_e)^2 = sum_e 2 e t^(e-1) (t^e - c_e)
  Rat acc = 0;
  Rat tpow_prev(1);  // t^(e-1)
  Rat tpow = t;      // t^e
  for (size_t e = 1; e <= centre.size(); ++e) {
    acc += Rat(2 * static_cast<long>(e)) * tpow_prev * (tpow - centre[e - 1]);
    tpow_prev = tpow;
    tpow *= t;
  }
  acc.canonicalize();
  return acc;
}

std::vector<Rat> solve_linear(std::vector<std::vector<Rat>> m, std::vector<Rat> rhs) {
  size_t n = rhs.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) fail(Errc::numeric, "singular sphere system");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rat f = m[r][col] / m[col][col];
      for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rat> x(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = rhs[i] / m[i][i];
    x[i].canonicalize();
  }
  return x;
}

}  // namespace

SphereFit fit_sphere_3d(const Rat& t1, const Rat& t2) {
  if (!(0 < t1 && t1 < t2)) fail(Errc::invalid_argument, "need 0 < t1 < t2");
  const Rat& i = t1;
  const Rat& j = t2;
  Rat a = i * j * (i + j) * (3 * i * i + 3 * i * j + 3 * j * j + 1);
  Rat b = -(3 * i * i * i * i + 12 * i * i * i * j + 15 * i * i * j * j + i * i +
            12 * i * j * j * j + 4 * i * j + 3 * j * j * j * j + j * j - 1) /
          2;
  Rat c = (i + j) * (2 * i * i + i * j + 2 * j * j + 1);
  SphereFit fit;
  fit.dim = 3;
  fit.t_values = {t1, t2};
  fit.centre = {a, b, c};
  for (Rat& x : fit.centre) x.canonicalize();
  fit.radius_sq = poly_f(fit.centre, t1);
  return fit;
}

SphereFit fit_sphere_4d(const Rat& t0, const Rat& t1, const Rat& t2, const Point& through) {
  if (!(0 < t0 && t0 < t1 && t1 < t2)) fail(Errc::invalid_argument, "need 0 < t0 < t1 < t2");
  if (through.dim() != 4 || through.lift_axis >= 0)
    fail(Errc::invalid_argument, "through point must be a rational point of R^4");
  bool canonical = t0 == 1 && through.coords[0] == 1 && through.coords[1] == 1 &&
                   through.coords[2] == 1 && through.coords[3] == 1;
  SphereFit fit;
  fit.dim = 4;
  fit.t_values = {t0, t1, t2};
  if (canonical) {
    const Rat& I = t1;
    const Rat& J = t2;
    Rat I2 = I * I, I3 = I2 * I, I4 = I3 * I, I5 = I4 * I;
    Rat J2 = J * J, J3 = J2 * J, J4 = J3 * J, J5 = J4 * J;
    Rat a = -I * J * (I + J) *
            (2 * I3 * J + 4 * I3 + I2 * J2 + 6 * I2 * J + 3 * I2 + 2 * I * J3 + 6 * I * J2 +
             5 * I * J + 4 * I + 4 * J3 + 3 * J2 + 4 * J + 2);
    Rat b = (8 * I5 * J + 4 * I5 + 17 * I4 * J2 + 22 * I4 * J + 3 * I4 + 20 * I3 * J3 +
             34 * I3 * J2 + 20 * I3 * J + 4 * I3 + 17 * I2 * J4 + 34 * I2 * J3 + 29 * I2 * J2 +
             20 * I2 * J + 2 * I2 + 8 * I * J5 + 22 * I * J4 + 20 * I * J3 + 20 * I * J2 +
             8 * I * J + 4 * J5 + 3 * J4 + 4 * J3 + 2 * J2 + 1) /
            2;
    Rat c = -(I + J) * (2 * I4 + 6 * I3 * J + 4 * I3 + 5 * I2 * J2 + 6 * I2 * J + 4 * I2 +
                        6 * I * J3 + 6 * I * J2 + 7 * I * J + 4 * I + 2 * J4 + 4 * J3 + 4 * J2 +
                        4 * J + 2);
    Rat d = (5 * I4 + 8 * I3 * J + 4 * I3 + 9 * I2 * J2 + 6 * I2 * J + 6 * I2 + 8 * I * J3 +
             6 * I * J2 + 8 * I * J + 4 * I + 5 * J4 + 4 * J3 + 6 * J2 + 4 * J + 3) /
            2;
    fit.centre = {a, b, c, d};
  } else {
    // unknowns (a, b, c, d); all four defining equations are linear in them
    auto curve = [](const Rat& t) {
      return std::vector<Rat>{t, t * t, t * t * t, t * t * t * t};
    };
    auto p1 = curve(t1), p2 = curve(t2);
    const std::vector<Rat>& pz = through.coords;
    auto norm2 = [](const std::vector<Rat>& p) {
      Rat s = 0;
      for (const Rat& x : p) s += x * x;
      return s;
    };
    std::vector<std::vector<Rat>> m(4, std::vector<Rat>(4));
    std::vector<Rat> rhs(4);
    // |p1 - c|^2 = |p2 - c|^2  and  |p1 - c|^2 = |pz - c|^2
    for (int col = 0; col < 4; ++col) m[0][col] = 2 * (p2[col] - p1[col]);
    rhs[0] = norm2(p2) - norm2(p1);
    for (int col = 0; col < 4; ++col) m[1][col] = 2 * (pz[col] - p1[col]);
    rhs[1] = norm2(pz) - norm2(p1);
    // tangency: sum_e e t^(e-1) (t^e - c_e) = 0 at t1, t2
    int row = 2;
    for (const Rat& t : {t1, t2}) {
      Rat tp_prev(1), tp = t, rhsv = 0;
      for (int e = 1; e <= 4; ++e) {
        m[row][e - 1] = Rat(e) * tp_prev;
        rhsv += Rat(e) * tp_prev * tp;
        tp_prev = tp;
        tp *= t;
      }
      rhs[row] = rhsv;
      ++row;
    }
    fit.centre = solve_linear(std::move(m), std::move(rhs));
  }
  for (Rat& x : fit.centre) x.canonicalize();
  fit.radius_sq = poly_f(fit.centre, t1);
  return fit;
}

Rat sphere_clearance_value(const SphereFit& fit, const Rat& t) {
  Rat v = poly_f(fit.centre, t) - fit.radius_sq;
  v.canonicalize();
  return v;
}

Rat sphere_tangency_residual(const SphereFit& fit, const Rat& t) {
  return poly_fprime(fit.centre, t);
}

ClearanceReport sphere_curve_clearance(const SphereFit& fit, const std::vector<Rat>& t_grid) {
  ClearanceReport rep;
  for (const Rat& t : t_grid) {
    for (const Rat& tv : fit.t_values)
      if (t == tv)
        fail(Errc::invalid_argument,
             "clearance grid contains a tangency/intersection parameter");
    ++rep.checked;
    if (sphere_clearance_value(fit, t) <= 0) {
      rep.all_positive = false;
      rep.failing_ts.push_back(t);
    }
  }
  return rep;
}

std::vector<Rat> canonical_clearance_grid(const SphereFit& fit, int n) {
  std::set<Rat> grid;
  std::vector<Rat> anchors = fit.t_values;
  if (fit.dim == 3) anchors.insert(anchors.begin(), Rat(0));
  // the positivity claim starts at the first anchor (the pass-through point
  // for 4-dimensional fits; the curve may dip inside the sphere before it)
  Rat lo = anchors.front();
  Rat last = anchors.back() + 10;
  Rat step(1, 16);
  for (size_t seg = 0; seg + 1 < anchors.size(); ++seg) {
    for (Rat t = anchors[seg] + step; t < anchors[seg + 1]; t += step) grid.insert(t);
  }
  for (Rat t = anchors.back() + step; t <= last; t += step) grid.insert(t);
  for (int h = 1; h <= 2 * (n + 1); ++h)
    if (Rat(h, 2) > lo) grid.insert(Rat(h, 2));
  for (const Rat& tv : fit.t_values) grid.erase(tv);
  grid.erase(Rat(0));
  return {grid.begin(), grid.end()};
}

// ---- pvc instances ----

RadicalSum PvcInstance::r_q() const { return RadicalSum::of(Scalar::sqrt_of(r_q_sq)); }

RadicalSum PvcInstance::eps() const {
  RadicalSum e;
  e.add_term(Rat(1), Rat((r_q_sq + Rat(1, 4)) / r_q_sq));
  e += RadicalSum(Rat(-1));
  return e;
}

RadicalSum PvcInstance::eps_prime() const { return eps().scaled(Rat(1, 2 * num_edges)); }

RadicalSum PvcInstance::one_plus_eps_prime() const {
  return RadicalSum(Rat(1)) + eps_prime();
}

RadicalSum PvcInstance::cost_formula(int coverage) const {
  RadicalSum c = RadicalSum::of(Scalar::sqrt_of(r_q_sq), Rat(coverage));
  c += RadicalSum::of(Scalar::sqrt_of(Rat(r_q_sq + Rat(1, 4))), Rat(num_edges - coverage));
  return c;
}

std::vector<int> PvcInstance::vertex_centres(const std::vector<int>& vertices) const {
  std::vector<int> out;
  out.reserve(vertices.size());
  for (int v : vertices) out.push_back(vertex_centre_base + v - 1);
  if (z_star_id >= 0) out.push_back(z_star_id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> PvcInstance::centre_vertices(const std::vector<int>& centre_ids) const {
  std::vector<int> out;
  for (int id : centre_ids)
    if (id != z_star_id) out.push_back(id - vertex_centre_base + 1);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void append_pvc_provenance(PvcInstance& pv, const PvcGraph& g, const char* source) {
  auto& prov = pv.inst.provenance;
  prov.emplace_back("source", source);
  prov.emplace_back("n", std::to_string(g.n_vertices));
  prov.emplace_back("m", std::to_string(g.edges.size()));
  prov.emplace_back("k", std::to_string(g.k));
  prov.emplace_back("s", std::to_string(g.s));
  std::ostringstream es;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    if (i) es << " ";
    es << g.edges[i].first << "-" << g.edges[i].second;
  }
  prov.emplace_back("edges", es.str());
  prov.emplace_back("r_q_sq", rat_to_string(pv.r_q_sq));
  prov.emplace_back("q_edge",
                    std::to_string(pv.q_edge.first) + "-" + std::to_string(pv.q_edge.second));
  prov.emplace_back("vertex_centre_base", std::to_string(pv.vertex_centre_base));
  if (pv.z_star_id >= 0) prov.emplace_back("z_star_id", std::to_string(pv.z_star_id));
  // eps = sqrt((r_q^2 + 1/4)/r_q^2) - 1, eps' = eps / 2m; both derived from r_q_sq
  prov.emplace_back("eps_def", "sqrt((r_q_sq+1/4)/r_q_sq)-1");
  prov.emplace_back("eps_prime_def", "eps/" + std::to_string(2 * g.edges.size()));
}

}  // namespace

PvcInstance build_pvc4_instance(const PvcGraph& g) {
  g.validate();
  if (g.edges.empty()) fail(Errc::invalid_argument, "pvc reduction needs at least one edge");
  PvcInstance pv;
  pv.num_edges = static_cast<int>(g.edges.size());
  std::vector<SphereFit> fits;
  fits.reserve(g.edges.size());
  pv.r_q_sq = 0;
  for (const auto& [i, j] : g.edges) {
    fits.push_back(fit_sphere_3d(Rat(i), Rat(j)));
    if (fits.back().radius_sq > pv.r_q_sq) {
      pv.r_q_sq = fits.back().radius_sq;
      pv.q_edge = {i, j};
    }
  }
  Instance& inst = pv.inst;
  inst.objective = Objective::kmedian;
  inst.k = g.k;
  inst.metric.kind = MetricKind::euclidean;
  inst.has_penalties = true;
  Scalar penalty = Scalar::sqrt_of(Rat(pv.r_q_sq + Rat(1, 4)));  // r_q (1 + eps)
  for (size_t e = 0; e < g.edges.size(); ++e) {
    Point p;
    p.id = static_cast<int>(e);
    p.coords = {fits[e].centre[0], fits[e].centre[1], fits[e].centre[2], Rat(0)};
    p.lift_axis = 3;
    p.lift_sq = pv.r_q_sq - fits[e].radius_sq;
    inst.points.push_back(std::move(p));
    inst.penalties[static_cast<int>(e)] = penalty;
  }
  pv.vertex_centre_base = static_cast<int>(g.edges.size());
  for (int t = 1; t <= g.n_vertices; ++t) {
    Point c;
    c.id = pv.vertex_centre_base + t - 1;
    Rat rt(t);
    c.coords = {rt, rt * rt, rt * rt * rt, Rat(0)};
    inst.centres.push_back(std::move(c));
  }
  append_pvc_provenance(pv, g, "pvc4");
  inst.finalize();
  return pv;
}

PvcInstance build_pvc6_instance(const PvcGraph& g) {
  g.validate();
  if (g.edges.empty()) fail(Errc::invalid_argument, "pvc reduction needs at least one edge");
  PvcInstance pv;
  pv.num_edges = static_cast<int>(g.edges.size());
  Point z_star;  // pass-through point (1,1,1,1) in the curve's R^4
  z_star.coords = {Rat(1), Rat(1), Rat(1), Rat(1)};
  std::vector<SphereFit> fits;
  fits.reserve(g.edges.size());
  pv.r_q_sq = 0;
  for (const auto& [i, j] : g.edges) {
    fits.push_back(fit_sphere_4d(Rat(1), Rat(i + 1), Rat(j + 1), z_star));
    if (fits.back().radius_sq > pv.r_q_sq) {
      pv.r_q_sq = fits.back().radius_sq;
      pv.q_edge = {i, j};
    }
  }
  Instance& inst = pv.inst;
  inst.objective = Objective::kmedian;
  inst.k = g.k + 1;
  inst.metric.kind = MetricKind::euclidean;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    Point p;
    p.id = static_cast<int>(e);
    p.coords = {fits[e].centre[0], fits[e].centre[1], fits[e].centre[2], fits[e].centre[3],
                Rat(0), Rat(0)};
    p.lift_axis = 4;
    p.lift_sq = pv.r_q_sq - fits[e].radius_sq;
    inst.points.push_back(std::move(p));
  }
  // z~* = (1,1,1,1,0,1/2) carries ceil(m r_q) co-located points
  pv.z_star_id = static_cast<int>(g.edges.size());
  Point pile;
  pile.id = pv.z_star_id;
  pile.coords = {Rat(1), Rat(1), Rat(1), Rat(1), Rat(0), Rat(1, 2)};
  pile.multiplicity = static_cast<unsigned long long>(
      mpz_get_ui(ceil_mul_sqrt(Int(pv.num_edges), pv.r_q_sq).get_mpz_t()));
  inst.points.push_back(pile);
  Point zc;
  zc.id = pv.z_star_id;
  zc.coords = pile.coords;
  inst.centres.push_back(zc);
  pv.vertex_centre_base = pv.z_star_id + 1;
  for (int t = 1; t <= g.n_vertices; ++t) {
    Point c;
    c.id = pv.vertex_centre_base + t - 1;
    Rat rt(t + 1);
    c.coords = {rt, rt * rt, rt * rt * rt, rt * rt * rt * rt, Rat(0), Rat(0)};
    inst.centres.push_back(std::move(c));
  }
  append_pvc_provenance(pv, g, "pvc6");
  inst.finalize();
  return pv;
}

// ---- equivalence certificates ----

namespace {

std::string diff_str(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

}  // namespace

ReductionCertificate certify_pvc_equivalence(const PvcGraph& g, int variant,
                                             unsigned long long budget) {
  if (variant != 4 && variant != 6) fail(Errc::invalid_argument, "pvc variant must be 4 or 6");
  PvcInstance pv = variant == 4 ? build_pvc4_instance(g) : build_pvc6_instance(g);
  PvcSolveResult pvc = solve_pvc(g, budget);
  int m = pv.num_edges;

  ReductionCertificate cert;
  cert.variant = variant == 4 ? "pvc4" : "pvc6";
  cert.source_solvable = pvc.best_coverage >= g.s;

  auto feas = enumerate_feasible(pv.inst, budget);
  std::vector<RadicalSum> costs;
  costs.reserve(feas.size());
  RadicalSum best;
  bool have = false;
  for (const auto& S : feas) {
    costs.push_back(cost_of(pv.inst, S));
    if (!have || costs.back() < best) {
      best = costs.back();
      have = true;
    }
  }
  cert.clustering_optimum = best.str();
  cert.threshold = pv.cost_formula(g.s).str();

  bool all_ok = true;
  // iff sweep: a cover of size k with >= s edges exists  <=>  some solution
  // costs at most r_q (m + (m - s) eps)
  for (int s = 0; s <= m; ++s) {
    RadicalSum tau = pv.cost_formula(s);
    bool lhs = pvc.best_coverage >= s;
    bool rhs = false;
    for (const auto& c : costs)
      if (c <= tau) {
        rhs = true;
        break;
      }
    if (lhs != rhs) {
      all_ok = false;
      cert.detail.push_back("iff fails at s=" + std::to_string(s));
    }
  }
  // optima correspondence
  std::set<std::vector<int>> expected;
  for (const auto& cover : pvc.covers) expected.insert(pv.vertex_centres(cover));
  std::set<std::vector<int>> optima;
  for (size_t i = 0; i < feas.size(); ++i)
    if (costs[i].compare(best) == 0) optima.insert(feas[i]);
  if (optima != expected) {
    all_ok = false;
    cert.detail.push_back("optima do not match the maximum partial covers");
  }
  // exact cost formula on every solution the lemma speaks about
  for (size_t i = 0; i < feas.size(); ++i) {
    if (variant == 6 &&
        !std::binary_search(feas[i].begin(), feas[i].end(), pv.z_star_id))
      continue;
    std::vector<int> verts = pv.centre_vertices(feas[i]);
    RadicalSum expect = pv.cost_formula(g.coverage(verts));
    if (costs[i].compare(expect) != 0) {
      all_ok = false;
      cert.detail.push_back("cost formula fails on solution {" + diff_str(feas[i]) + "}");
    }
  }
  if (variant == 6) {
    for (const auto& o : optima)
      if (!std::binary_search(o.begin(), o.end(), pv.z_star_id)) {
        all_ok = false;
        cert.detail.push_back("an optimum omits the z* centre");
      }
  }
  cert.equivalent = all_ok;
  if (all_ok)
    cert.detail.push_back("iff verified for s in [0," + std::to_string(m) + "], s* = " +
                          std::to_string(pvc.best_coverage));
  return cert;
}

ReductionCertificate certify_grid_equivalence(const GridReductionSpec& spec_in,
                                              unsigned long long budget,
                                              bool cylinder_variant) {
  GridReductionSpec spec = spec_in;
  spec.validate_and_derive();
  Instance inst = cylinder_variant ? build_cylinder_instance(spec) : build_grid_instance(spec);
  auto tiling = solve_grid_tiling(spec.gt, budget);

  ReductionCertificate cert;
  cert.variant = cylinder_variant ? "cylinder" : "grid";
  cert.source_solvable = tiling.has_value();

  // nu: cost of a known yes-configuration. For an unsolvable source the
  // reference configuration lives on the full-sets instance with the same
  // (n, k, eps); its all-(1,1) selection is monotone by construction.
  auto selection_solution = [&](const Instance& in, const GridReductionSpec& sp,
                                const GridSelection& sel) {
    std::vector<int> ids;
    for (const auto& [cell, ab] : sel) {
      auto [u, v] = centre_lattice_index(sp, cell.first, cell.second, ab.first, ab.second);
      ids.push_back(static_cast<int>(lattice_id(sp.width, u, v)));
    }
    if (cylinder_variant) {
      long sigma = mpz_get_si(sp.sigma.get_mpz_t());
      for (int s = 0; s < 2 * sp.gt.k * sp.gt.k; ++s) ids.push_back(static_cast<int>(sigma) + s);
    }
    std::sort(ids.begin(), ids.end());
    return cost_of(in, ids);
  };

  RadicalSum nu;
  if (tiling) {
    nu = selection_solution(inst, spec, *tiling);
  } else {
    GridReductionSpec ref = spec;
    ref.gt.sets.clear();
    std::vector<std::pair<int, int>> full;
    for (int a = 1; a <= spec.gt.n; ++a)
      for (int b = 1; b <= spec.gt.n; ++b) full.emplace_back(a, b);
    for (int i = 1; i <= spec.gt.k; ++i)
      for (int j = 1; j <= spec.gt.k; ++j) ref.gt.sets[{i, j}] = full;
    ref.validate_and_derive();
    Instance ref_inst = cylinder_variant ? build_cylinder_instance(ref) : build_grid_instance(ref);
    GridSelection anchor;
    for (int i = 1; i <= spec.gt.k; ++i)
      for (int j = 1; j <= spec.gt.k; ++j) anchor[{i, j}] = {1, 1};
    nu = selection_solution(ref_inst, ref, anchor);
  }
  cert.threshold = nu.str();

  OptimaSet opt = solve_exact(inst, budget);
  cert.clustering_optimum = opt.optimal_cost.str();
  bool opt_within = opt.optimal_cost <= nu;
  cert.equivalent = (opt_within == cert.source_solvable);
  cert.detail.push_back(std::string("tiling ") + (tiling ? "solvable" : "unsolvable") +
                        ", optimum " + (opt_within ? "<=" : ">") + " nu");

  // structural note: does every optimum open exactly one centre per nonempty
  // cell (and keep every sentinel, for the cylinder variant)?
  bool one_per_cell = true;
  long sigma = mpz_get_si(spec.sigma.get_mpz_t());
  for (const auto& sol : opt.solutions) {
    std::map<std::pair<long, long>, int> cells;
    int sentinels = 0;
    for (int id : sol) {
      if (cylinder_variant && id >= sigma) {
        ++sentinels;
        continue;
      }
      const Point& c = inst.centre_by_id(id);
      long ci = mpz_get_si(floor_rat(Rat((c.coords[0] + 1) / 2)).get_mpz_t());
      long cj = mpz_get_si(floor_rat(Rat((c.coords[1] + 1) / 2)).get_mpz_t());
      cells[{ci, cj}]++;
    }
    for (const auto& [cell, cnt] : cells)
      if (cnt != 1) one_per_cell = false;
    if (static_cast<int>(cells.size()) != spec.gt.k * spec.gt.k) one_per_cell = false;
    if (cylinder_variant && sentinels != 2 * spec.gt.k * spec.gt.k) one_per_cell = false;
  }
  cert.detail.push_back(std::string("optima one-centre-per-cell: ") +
                        (one_per_cell ? "yes" : "no"));
  return cert;
}

MeasureReport measure_approx_check(const Point& a, const Rat& r, const Rat& eps) {
  if (r <= 0 || r > 1) fail(Errc::invalid_argument, "measure check needs 0 < r <= 1");
  Rat invq = 1 / eps;
  if (eps <= 0 || invq.get_den() != 1)
    fail(Errc::invalid_argument, "1/eps must be a positive integer");
  if (a.dim() != 2 || a.lift_axis >= 0)
    fail(Errc::invalid_argument, "centre must be a rational point of R^2");
  for (const Rat& c : a.coords)
    if (Rat(c * invq).get_den() != 1)
      fail(Errc::invalid_argument, "centre must sit on the eps-lattice");

  Int q = invq.get_num();
  long qi = mpz_get_si(q.get_mpz_t());
  Rat rq = r * invq;  // disc radius in lattice units
  Rat rq_sq = rq * rq;
  long lim = mpz_get_si(ceil_rat(rq).get_mpz_t());

  MeasureReport rep;
  rep.r = r;
  rep.eps = eps;
  double sum = 0;
  for (long du = -lim; du <= lim; ++du) {
    for (long dv = -lim; dv <= lim; ++dv) {
      Rat d2(du * du + dv * dv);
      if (d2 > rq_sq) continue;
      ++rep.lattice_count;
      sum += std::sqrt(d2.get_d()) / static_cast<double>(qi);
    }
  }
  rep.sum_dist = sum;

  const double pi = 3.14159265358979323846;
  double rd = rat_to_double(r), ed = rat_to_double(eps);
  double rminus = std::max(0.0, rd - ed);
  rep.count_lower = pi * rminus * rminus / (ed * ed);
  rep.count_upper = pi * (rd + ed) * (rd + ed) / (ed * ed);
  rep.dist_upper =
      (2.0 / 3.0 * pi * std::pow(rd + ed, 3) + ed * pi * std::pow(rd + ed, 2)) / (ed * ed);
  const double tol = 1e-9;
  double count = static_cast<double>(rep.lattice_count);
  rep.count_ok = rep.count_lower <= count + tol && count <= rep.count_upper + tol;
  rep.dist_ok = rep.sum_dist <= rep.dist_upper + tol;
  return rep;
}

}  // namespace skm
