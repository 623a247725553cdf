#include "support/fixtures.hpp"

#include <algorithm>

namespace skm::testing {

namespace {

Point pt(int id, std::vector<Rat> coords, unsigned long long mult = 1) {
  Point p;
  p.id = id;
  p.coords = std::move(coords);
  p.multiplicity = mult;
  return p;
}

}  // namespace

Instance line_instance(Objective obj) {
  Instance inst;
  inst.objective = obj;
  inst.k = 2;
  inst.metric.kind = MetricKind::euclidean;
  for (int x : {0, 1, 4, 5}) {
    inst.points.push_back(pt(x, {Rat(x)}));
    inst.centres.push_back(pt(x, {Rat(x)}));
  }
  inst.finalize();
  return inst;
}

Instance small_penalty_instance() {
  Instance inst;
  inst.objective = Objective::kmedian;
  inst.k = 1;
  inst.metric.kind = MetricKind::euclidean;
  inst.points.push_back(pt(0, {Rat(0)}));
  inst.points.push_back(pt(10, {Rat(10)}));
  inst.centres.push_back(pt(0, {Rat(0)}));
  inst.has_penalties = true;
  inst.penalties[0] = Scalar::rational(Rat(5));
  inst.penalties[10] = Scalar::rational(Rat(3));
  inst.finalize();
  return inst;
}

Instance two_optima_instance() {
  Instance inst;
  inst.objective = Objective::kmedian;
  inst.k = 1;
  inst.metric.kind = MetricKind::euclidean;
  for (int x : {0, 1}) {
    inst.points.push_back(pt(x, {Rat(x)}));
    inst.centres.push_back(pt(x, {Rat(x)}));
  }
  inst.finalize();
  return inst;
}

Instance random_instance(std::mt19937_64& rng, int n_points, int n_centres, int k, int dim,
                         Objective obj, bool penalties) {
  Instance inst;
  inst.objective = obj;
  inst.k = k;
  inst.metric.kind = MetricKind::euclidean;
  auto coord = [&rng] { return Rat(static_cast<long>(rng() % 41), 1 + rng() % 3); };
  for (int i = 0; i < n_points; ++i) {
    std::vector<Rat> c;
    for (int d = 0; d < dim; ++d) c.push_back(coord());
    inst.points.push_back(pt(i, std::move(c)));
  }
  for (int i = 0; i < n_centres; ++i) {
    std::vector<Rat> c;
    for (int d = 0; d < dim; ++d) c.push_back(coord());
    inst.centres.push_back(pt(1000 + i, std::move(c)));
  }
  if (penalties) {
    inst.has_penalties = true;
    for (int i = 0; i < n_points; ++i)
      inst.penalties[i] = Scalar::rational(Rat(1 + static_cast<long>(rng() % 30)));
  }
  inst.finalize();
  return inst;
}

Instance clustered_instance(std::mt19937_64& rng, int n_clusters, Objective obj, bool penalties,
                            int extra_centres_per_cluster, int points_per_cluster) {
  // k-means fixtures live in 2-D, k-median ones on the integer line so both
  // have integral costs; extra centres sit far enough from the cluster core
  // that swapping one in costs much more than the stability scaling can save
  Instance inst;
  inst.objective = obj;
  inst.k = n_clusters;
  inst.metric.kind = MetricKind::euclidean;
  bool flat = obj == Objective::kmedian;
  int pid = 0, cid = 1000;
  long spread = 1000;
  auto coords = [&](long x, long y) {
    return flat ? std::vector<Rat>{Rat(x)} : std::vector<Rat>{Rat(x), Rat(y)};
  };
  for (int c = 0; c < n_clusters; ++c) {
    long cx = (c + 1) * spread, cy = (c % 2) * spread;
    inst.centres.push_back(pt(cid++, coords(cx, cy)));
    for (int e = 0; e < extra_centres_per_cluster; ++e)
      inst.centres.push_back(pt(cid++, coords(cx + 8 + static_cast<long>(rng() % 4),
                                              cy + 6 + static_cast<long>(rng() % 4))));
    for (int p = 0; p < points_per_cluster; ++p) {
      long dx = static_cast<long>(rng() % 5) - 2;
      long dy = static_cast<long>(rng() % 5) - 2;
      inst.points.push_back(pt(pid++, coords(cx + dx, cy + dy)));
    }
  }
  if (penalties) {
    inst.has_penalties = true;
    // large non-binding penalties on cluster points keep the optimum unique
    for (const Point& p : inst.points)
      inst.penalties[p.id] = Scalar::rational(Rat(4 * spread * spread));
    // one far outlier that always pays its (small) penalty
    inst.points.push_back(pt(pid, coords(50 * spread, 50 * spread)));
    inst.penalties[pid] = Scalar::rational(Rat(7));
    ++pid;
  }
  inst.finalize();
  return inst;
}

GridTilingInstance full_grid_tiling(int n, int k) {
  GridTilingInstance gt;
  gt.n = n;
  gt.k = k;
  std::vector<std::pair<int, int>> full;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) full.emplace_back(a, b);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) gt.sets[{i, j}] = full;
  return gt;
}

GridTilingInstance row_offset_grid_tiling(int n, int k) {
  GridTilingInstance gt;
  gt.n = n;
  gt.k = k;
  std::vector<std::pair<int, int>> opts;
  for (int a = 1; a <= n; ++a) opts.emplace_back(a, 1);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) gt.sets[{i, j}] = opts;
  return gt;
}

GridTilingInstance unsolvable_grid_tiling() {
  // forced anti-monotone singletons; offset 2 makes the disc overlap deep
  // enough that coarse lattices see it
  GridTilingInstance gt;
  gt.n = 3;
  gt.k = 2;
  gt.sets[{1, 1}] = {{3, 3}};
  gt.sets[{2, 1}] = {{1, 1}};
  gt.sets[{1, 2}] = {{1, 1}};
  gt.sets[{2, 2}] = {{3, 3}};
  return gt;
}

PvcGraph path_graph(int n, int k, int s) {
  PvcGraph g;
  g.n_vertices = n;
  g.k = k;
  g.s = s;
  for (int i = 1; i < n; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

PvcGraph triangle_graph(int k, int s) {
  PvcGraph g;
  g.n_vertices = 3;
  g.k = k;
  g.s = s;
  g.edges = {{1, 2}, {1, 3}, {2, 3}};
  return g;
}

PvcGraph star_graph(int leaves, int k, int s) {
  PvcGraph g;
  g.n_vertices = leaves + 1;
  g.k = k;
  g.s = s;
  for (int l = 2; l <= leaves + 1; ++l) g.edges.emplace_back(1, l);
  return g;
}

PvcGraph cycle_graph(int n, int k, int s) {
  PvcGraph g = path_graph(n, k, s);
  g.edges.emplace_back(1, n);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

PvcGraph random_graph(std::mt19937_64& rng, int n, double edge_prob, int k) {
  PvcGraph g;
  g.n_vertices = n;
  g.k = k;
  unsigned long long threshold =
      static_cast<unsigned long long>(edge_prob * 4294967296.0);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if ((rng() & 0xffffffffULL) < threshold) g.edges.emplace_back(u, v);
  if (g.edges.empty()) g.edges.emplace_back(1, std::max(2, n));
  g.s = static_cast<int>(g.edges.size());
  return g;
}

RadicalSum dist_bij_brute(const Instance& inst, const std::vector<int>& s1,
                          const std::vector<int>& s2) {
  std::vector<int> perm = s2;
  std::sort(perm.begin(), perm.end());
  bool have = false;
  RadicalSum best;
  do {
    RadicalSum total;
    for (size_t i = 0; i < s1.size(); ++i)
      total += RadicalSum::of(inst.dist_cc(s1[i], perm[i]));
    if (!have || total < best) {
      best = total;
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace skm::testing
