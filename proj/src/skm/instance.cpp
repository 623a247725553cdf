#include "instance.hpp"

#include <algorithm>
#include <set>

namespace skm {

std::string objective_name(Objective o) {
  return o == Objective::kmeans ? "kmeans" : "kmedian";
}

Objective objective_from_name(const std::string& s) {
  if (s == "kmeans") return Objective::kmeans;
  if (s == "kmedian") return Objective::kmedian;
  fail(Errc::parse, "unknown objective '" + s + "'");
}

void Instance::finalize() {
  if (k < 1 || k > static_cast<int>(centres.size()))
    fail(Errc::invalid_argument,
         "k = " + std::to_string(k) + " out of range for " + std::to_string(centres.size()) +
             " candidate centres");
  point_pos_.clear();
  centre_pos_.clear();
  centre_rank_.clear();
  auto canon = [](Point& p) {
    for (Rat& c : p.coords) c.canonicalize();
    p.lift_sq.canonicalize();
  };
  for (size_t i = 0; i < points.size(); ++i) {
    canon(points[i]);
    points[i].normalize_lift();
    if (!point_pos_.emplace(points[i].id, i).second)
      fail(Errc::invalid_argument, "duplicate point id " + std::to_string(points[i].id));
    if (points[i].multiplicity == 0)
      fail(Errc::invalid_argument, "zero multiplicity on point " + std::to_string(points[i].id));
  }
  for (size_t i = 0; i < centres.size(); ++i) {
    canon(centres[i]);
    centres[i].normalize_lift();
    if (!centre_pos_.emplace(centres[i].id, i).second)
      fail(Errc::invalid_argument, "duplicate centre id " + std::to_string(centres[i].id));
  }
  // a point and a centre sharing an id are the same node of V
  if (metric.kind != MetricKind::explicit_matrix) {
    for (const Point& c : centres) {
      auto it = point_pos_.find(c.id);
      if (it == point_pos_.end()) continue;
      const Point& p = points[it->second];
      if (p.coords != c.coords || p.lift_axis != c.lift_axis || p.lift_sq != c.lift_sq)
        fail(Errc::invalid_argument,
             "point and centre share id " + std::to_string(c.id) + " but not coordinates");
    }
  }
  if (centre_order.empty()) {
    for (const Point& c : centres) centre_order.push_back(c.id);
    std::sort(centre_order.begin(), centre_order.end());
  }
  if (centre_order.size() != centres.size())
    fail(Errc::invalid_argument, "centre_order size mismatch");
  for (size_t i = 0; i < centre_order.size(); ++i) {
    if (!centre_pos_.count(centre_order[i]))
      fail(Errc::invalid_argument, "centre_order names unknown centre id " +
                                       std::to_string(centre_order[i]));
    if (!centre_rank_.emplace(centre_order[i], static_cast<int>(i)).second)
      fail(Errc::invalid_argument, "centre_order repeats id " + std::to_string(centre_order[i]));
  }
  if (has_penalties) {
    for (const Point& p : points) {
      auto it = penalties.find(p.id);
      if (it == penalties.end())
        fail(Errc::invalid_argument,
             "penalty missing for point " + std::to_string(p.id));
      if (!(it->second > Scalar::rational(Rat(0))))
        fail(Errc::invalid_argument,
             "penalty must be strictly positive on point " + std::to_string(p.id));
      if (objective == Objective::kmeans && !it->second.is_rational())
        fail(Errc::invalid_argument, "k-means penalties must be rational");
    }
    if (penalties.size() != points.size())
      fail(Errc::invalid_argument, "penalty map names unknown points");
  } else if (!penalties.empty()) {
    fail(Errc::invalid_argument, "penalties present on a no-penalty instance");
  }

  dist_.assign(points.size(), {});
  cost_.assign(points.size(), {});
  for (size_t j = 0; j < points.size(); ++j) {
    dist_[j].reserve(centres.size());
    cost_[j].reserve(centres.size());
    for (size_t i = 0; i < centres.size(); ++i) {
      Scalar d = distance(metric, points[j], centres[i]);
      dist_[j].push_back(d);
      cost_[j].push_back(objective == Objective::kmeans ? Scalar::rational(d.square()) : d);
    }
  }
  finalized_ = true;
}

const Point& Instance::point_by_id(int id) const { return points[point_index(id)]; }
const Point& Instance::centre_by_id(int id) const { return centres[centre_index(id)]; }

size_t Instance::point_index(int id) const {
  auto it = point_pos_.find(id);
  if (it == point_pos_.end())
    fail(Errc::invalid_argument, "unknown point id " + std::to_string(id));
  return it->second;
}

size_t Instance::centre_index(int id) const {
  auto it = centre_pos_.find(id);
  if (it == centre_pos_.end())
    fail(Errc::invalid_argument, "unknown centre id " + std::to_string(id));
  return it->second;
}

int Instance::centre_rank(int id) const {
  auto it = centre_rank_.find(id);
  if (it == centre_rank_.end())
    fail(Errc::invalid_argument, "centre id " + std::to_string(id) + " not in centre_order");
  return it->second;
}

Scalar Instance::dist_cc(int c1, int c2) const {
  return distance(metric, centre_by_id(c1), centre_by_id(c2));
}

const Scalar& Instance::penalty_of(int point_id) const {
  auto it = penalties.find(point_id);
  if (it == penalties.end())
    fail(Errc::invalid_argument, "no penalty for point " + std::to_string(point_id));
  return it->second;
}

unsigned long long Instance::total_weight() const {
  unsigned long long w = 0;
  for (const Point& p : points) w += p.multiplicity;
  return w;
}

Rat Instance::max_sqdist() const {
  Rat best = 0;
  for (size_t j = 0; j < points.size(); ++j)
    for (size_t i = 0; i < centres.size(); ++i) {
      Rat s = dist_[j][i].square();
      if (s > best) best = s;
    }
  return best;
}

int nearest_centre(const Instance& inst, int point_id, const std::vector<int>& S) {
  if (S.empty()) fail(Errc::invalid_argument, "nearest_centre over empty centre set");
  size_t j = inst.point_index(point_id);
  int best = -1;
  size_t best_idx = 0;
  for (int cid : S) {
    size_t ci = inst.centre_index(cid);
    if (best < 0) {
      best = cid;
      best_idx = ci;
      continue;
    }
    int c = inst.dist_pc(j, ci).compare(inst.dist_pc(j, best_idx));
    if (c < 0 || (c == 0 && inst.centre_rank(cid) < inst.centre_rank(best))) {
      best = cid;
      best_idx = ci;
    }
  }
  return best;
}

namespace {

// index of the best centre of S for point j, distance ties by centre_order
size_t nearest_idx(const Instance& inst, size_t j, const std::vector<size_t>& s_idx,
                   const std::vector<int>& S) {
  size_t best = 0;
  for (size_t t = 1; t < s_idx.size(); ++t) {
    int c = inst.dist_pc(j, s_idx[t]).compare(inst.dist_pc(j, s_idx[best]));
    if (c < 0 || (c == 0 && inst.centre_rank(S[t]) < inst.centre_rank(S[best]))) best = t;
  }
  return best;
}

std::vector<size_t> centre_indices(const Instance& inst, const std::vector<int>& S) {
  std::vector<size_t> idx;
  idx.reserve(S.size());
  for (int cid : S) idx.push_back(inst.centre_index(cid));
  return idx;
}

}  // namespace

Solution solution_cost(const Instance& inst, const std::vector<int>& S) {
  if (static_cast<int>(S.size()) != inst.k)
    fail(Errc::invalid_argument, "solution has " + std::to_string(S.size()) +
                                     " centres, instance wants k = " + std::to_string(inst.k));
  std::set<int> uniq(S.begin(), S.end());
  if (uniq.size() != S.size()) fail(Errc::invalid_argument, "solution repeats a centre");
  Solution sol;
  sol.centres.assign(uniq.begin(), uniq.end());
  auto s_idx = centre_indices(inst, sol.centres);
  RadicalSum::Builder acc;
  for (size_t j = 0; j < inst.points.size(); ++j) {
    const Point& p = inst.points[j];
    size_t t = nearest_idx(inst, j, s_idx, sol.centres);
    const Scalar& connect = inst.assign_cost(j, s_idx[t]);
    // ties between paying the penalty and connecting resolve to connecting
    if (inst.has_penalties && inst.penalty_of(p.id) < connect) {
      const Scalar& pen = inst.penalty_of(p.id);
      sol.assignment[p.id] = kPenaltyAssignment;
      sol.per_point[p.id] = pen;
      acc.add(Rat(1), pen, rat_of_u64(p.multiplicity));
    } else {
      sol.assignment[p.id] = sol.centres[t];
      sol.per_point[p.id] = connect;
      acc.add(Rat(1), connect, rat_of_u64(p.multiplicity));
    }
  }
  sol.cost = acc.take();
  return sol;
}

RadicalSum cost_of(const Instance& inst, const std::vector<int>& S) {
  auto s_idx = centre_indices(inst, S);
  if (s_idx.empty()) fail(Errc::invalid_argument, "cost of empty solution");
  RadicalSum::Builder acc;
  for (size_t j = 0; j < inst.points.size(); ++j) {
    const Scalar* best = &inst.assign_cost(j, s_idx[0]);
    for (size_t t = 1; t < s_idx.size(); ++t) {
      const Scalar& c = inst.assign_cost(j, s_idx[t]);
      if (c < *best) best = &c;
    }
    if (inst.has_penalties) {
      const Scalar& pen = inst.penalty_of(inst.points[j].id);
      if (pen < *best) best = &pen;
    }
    acc.add(Rat(1), *best, rat_of_u64(inst.points[j].multiplicity));
  }
  return acc.take();
}

std::vector<int> AugmentedInstance::restrict_to_base(
    const std::vector<int>& lifted_solution) const {
  std::vector<int> out;
  out.reserve(lifted_solution.size());
  for (int id : lifted_solution)
    if (id != dummy_id) out.push_back(base_centre_id(id));
  std::sort(out.begin(), out.end());
  return out;
}

AugmentedInstance lift_penalties(const Instance& inst) {
  if (!inst.has_penalties) fail(Errc::invalid_argument, "instance has no penalties to lift");
  AugmentedInstance aug;
  aug.base = inst;
  int max_id = 0, max_cid = 0;
  for (const Point& p : inst.points) max_id = std::max(max_id, p.id);
  for (const Point& c : inst.centres) {
    max_id = std::max(max_id, c.id);
    max_cid = std::max(max_cid, c.id);
  }
  aug.centre_offset = max_id + 1;
  aug.dummy_id = aug.centre_offset + max_cid + 1;

  Instance& L = aug.lifted;
  L.objective = inst.objective;
  L.k = inst.k + 1;
  L.points = inst.points;
  for (const Point& c : inst.centres) {
    Point lc = c;
    lc.id = aug.lifted_centre_id(c.id);
    L.centres.push_back(std::move(lc));
  }
  Point dummy;
  dummy.id = aug.dummy_id;
  L.centres.push_back(dummy);
  L.has_penalties = false;
  L.metric.kind = MetricKind::explicit_matrix;
  L.metric.skip_triangle = true;
  L.provenance = inst.provenance;
  L.provenance.emplace_back("lifted_dummy_id", std::to_string(aug.dummy_id));
  L.provenance.emplace_back("lifted_centre_offset", std::to_string(aug.centre_offset));

  auto put = [&L](int a, int b, const Scalar& v) {
    if (a == b) return;
    L.metric.entries[{std::min(a, b), std::max(a, b)}] = v;
  };
  // delta(z*, j)^power = p(j) for data points, delta(z*, c) = 0 for centres
  for (const Point& p : inst.points) {
    const Scalar& pen = inst.penalty_of(p.id);
    put(p.id, aug.dummy_id,
        inst.objective == Objective::kmeans ? Scalar::sqrt_of(pen.v) : pen);
  }
  for (const Point& c : inst.centres)
    put(aug.lifted_centre_id(c.id), aug.dummy_id, Scalar::rational(Rat(0)));
  // base distances; point-point pairs the base metric cannot evaluate are
  // omitted (nothing downstream reads them)
  for (const Point& p : inst.points)
    for (const Point& c : inst.centres)
      put(p.id, aug.lifted_centre_id(c.id), distance(inst.metric, p, c));
  for (size_t i = 0; i < inst.centres.size(); ++i)
    for (size_t j = i + 1; j < inst.centres.size(); ++j)
      put(aug.lifted_centre_id(inst.centres[i].id), aug.lifted_centre_id(inst.centres[j].id),
          distance(inst.metric, inst.centres[i], inst.centres[j]));
  for (size_t i = 0; i < inst.points.size(); ++i)
    for (size_t j = i + 1; j < inst.points.size(); ++j) {
      try {
        put(inst.points[i].id, inst.points[j].id,
            distance(inst.metric, inst.points[i], inst.points[j]));
      } catch (const Error&) {
      }
    }

  // the explicit table is authoritative; the dummy gets placeholder coords so
  // the instance still serializes with uniform dimensions
  if (!inst.points.empty())
    L.centres.back().coords.assign(inst.points[0].dim(), Rat(0));
  std::vector<int> base_order = inst.centre_order;
  if (base_order.empty()) {
    for (const Point& c : inst.centres) base_order.push_back(c.id);
    std::sort(base_order.begin(), base_order.end());
  }
  for (int id : base_order) L.centre_order.push_back(aug.lifted_centre_id(id));
  L.centre_order.push_back(aug.dummy_id);
  L.finalize();
  if (!aug.base.finalized()) aug.base.finalize();
  return aug;
}

RadicalSum psi(const Instance& inst, const std::vector<int>& S, const std::vector<int>& O,
               bool penalized) {
  if (penalized && !inst.has_penalties)
    fail(Errc::invalid_argument, "psi_pen needs a penalty instance");
  std::set<int> sset(S.begin(), S.end()), oset(O.begin(), O.end());
  RadicalSum::Builder acc;
  for (const Point& p : inst.points) {
    int sig_s = nearest_centre(inst, p.id, S);
    int sig_o = nearest_centre(inst, p.id, O);
    bool in_bar = !oset.count(sig_s) && !sset.count(sig_o);
    if (!in_bar) continue;
    size_t j = inst.point_index(p.id);
    const Scalar& cs = inst.assign_cost(j, inst.centre_index(sig_s));
    const Scalar& co = inst.assign_cost(j, inst.centre_index(sig_o));
    if (penalized) {
      const Scalar& pen = inst.penalty_of(p.id);
      if (!(cs < pen) || !(co < pen)) continue;
    }
    Rat mult(static_cast<long>(p.multiplicity));
    acc.add(Rat(1), cs, mult);
    acc.add(Rat(1), co, mult);
  }
  return acc.take();
}

std::array<std::vector<int>, 4> partition_x1_x4(const Instance& inst, const std::vector<int>& S,
                                                const std::vector<int>& O) {
  if (!inst.has_penalties) fail(Errc::invalid_argument, "partition needs a penalty instance");
  std::set<int> sset(S.begin(), S.end()), oset(O.begin(), O.end());
  std::array<std::vector<int>, 4> parts;
  for (const Point& p : inst.points) {
    int sig_s = nearest_centre(inst, p.id, S);
    int sig_o = nearest_centre(inst, p.id, O);
    size_t j = inst.point_index(p.id);
    const Scalar& pen = inst.penalty_of(p.id);
    bool u = inst.assign_cost(j, inst.centre_index(sig_s)) < pen;
    bool v = inst.assign_cost(j, inst.centre_index(sig_o)) < pen;
    bool s_shared = oset.count(sig_s) > 0;
    bool o_shared = sset.count(sig_o) > 0;
    if ((s_shared && o_shared) || (!u && !v)) {
      parts[2].push_back(p.id);  // X^3
    } else if (!s_shared && !o_shared && u && v) {
      parts[3].push_back(p.id);  // X^4
    } else if (!s_shared && u) {
      parts[0].push_back(p.id);  // X^1
    } else {
      parts[1].push_back(p.id);  // X^2
    }
  }
  return parts;
}

}  // namespace skm
