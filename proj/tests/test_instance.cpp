#include <random>
#include <set>

#include "doctest.h"
#include "skm/oracle.hpp"
#include "support/fixtures.hpp"

using namespace skm;
using namespace skm::testing;

TEST_CASE("nearest centre with order tie-breaking") {
  Instance inst = line_instance();
  CHECK(nearest_centre(inst, 1, {0, 4}) == 0);
  // point 2 would tie between 0 and 4; add it to a copy with custom order
  Instance inst2 = line_instance();
  inst2.points.push_back([] {
    Point p;
    p.id = 2;
    p.coords = {Rat(2)};
    return p;
  }());
  inst2.centre_order = {4, 0, 1, 5};
  inst2.finalize();
  CHECK(nearest_centre(inst2, 2, {0, 4}) == 4);
  inst2.centre_order = {0, 1, 4, 5};
  inst2.finalize();
  CHECK(nearest_centre(inst2, 2, {0, 4}) == 0);
  CHECK_THROWS_AS(nearest_centre(inst, 1, {}), Error);

  // matches a linear re-scan on random instances
  std::mt19937_64 rng(3);
  Instance r = random_instance(rng, 10, 6, 3, 2, Objective::kmedian, false);
  std::vector<int> S = {1000, 1002, 1005};
  for (const Point& p : r.points) {
    int got = nearest_centre(r, p.id, S);
    for (int cid : S) {
      Scalar dg = distance(r.metric, p, r.centre_by_id(got));
      Scalar dc = distance(r.metric, p, r.centre_by_id(cid));
      CHECK(dg <= dc);
    }
  }
}

TEST_CASE("solution costs on the line instance") {
  Instance med = line_instance(Objective::kmedian);
  Solution s = solution_cost(med, {0, 4});
  CHECK(s.cost == RadicalSum(Rat(2)));
  CHECK(s.assignment.at(1) == 0);
  CHECK(s.assignment.at(5) == 4);
  Instance means = line_instance(Objective::kmeans);
  CHECK(solution_cost(means, {0, 4}).cost == RadicalSum(Rat(2)));
  CHECK(solution_cost(means, {0, 1}).cost == RadicalSum(Rat(25)));  // 9 + 16
  CHECK_THROWS_AS(solution_cost(med, {0}), Error);
  CHECK_THROWS_AS(solution_cost(med, {0, 0}), Error);
}

TEST_CASE("penalty opt-out pays min(distance, penalty)") {
  Instance inst = small_penalty_instance();
  Solution s = solution_cost(inst, {0});
  CHECK(s.cost == RadicalSum(Rat(3)));
  CHECK(s.assignment.at(0) == 0);
  CHECK(s.assignment.at(10) == kPenaltyAssignment);
  CHECK(s.per_point.at(10) == Scalar::rational(Rat(3)));
  // tie between distance and penalty resolves to assignment
  Instance tie = small_penalty_instance();
  tie.penalties[10] = Scalar::rational(Rat(10));
  tie.finalize();
  CHECK(solution_cost(tie, {0}).assignment.at(10) == 0);
}

TEST_CASE("lift_penalties reproduces penalty costs exactly") {
  Instance inst = small_penalty_instance();
  AugmentedInstance aug = lift_penalties(inst);
  CHECK(aug.lifted.k == 2);
  CHECK(aug.lifted.centres.size() == 2);
  CHECK_FALSE(aug.lifted.has_penalties);
  CHECK(cost_of(aug.lifted, {aug.lifted_centre_id(0), aug.dummy_id}) == RadicalSum(Rat(3)));

  // non-binding penalties: lifted optimum equals the no-penalty optimum
  Instance line = line_instance();
  Instance big = line;
  big.has_penalties = true;
  for (const Point& p : big.points) big.penalties[p.id] = Scalar::rational(Rat(1000));
  big.finalize();
  AugmentedInstance aug2 = lift_penalties(big);
  OptimaSet lifted_opt = solve_exact(aug2);
  OptimaSet plain_opt = solve_exact(line);
  CHECK(lifted_opt.optimal_cost == plain_opt.optimal_cost);
}

TEST_CASE("lift identity over all dummy-containing subsets") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    Objective obj = trial % 2 ? Objective::kmeans : Objective::kmedian;
    Instance inst = random_instance(rng, 6, 6, 2, 2, obj, true);
    AugmentedInstance aug = lift_penalties(inst);
    for (const auto& S : enumerate_feasible(inst, 1000)) {
      std::vector<int> lifted_S;
      for (int id : S) lifted_S.push_back(aug.lifted_centre_id(id));
      lifted_S.push_back(aug.dummy_id);
      std::sort(lifted_S.begin(), lifted_S.end());
      CHECK(cost_of(aug.lifted, lifted_S) == cost_of(inst, S));
      CHECK(aug.restrict_to_base(lifted_S) == S);
    }
  }
}

TEST_CASE("psi on the line instance") {
  Instance means = line_instance(Objective::kmeans);
  CHECK(psi(means, {0, 4}, {0, 4}, false).is_zero());
  CHECK(psi(means, {0, 4}, {1, 5}, false) == RadicalSum(Rat(4)));
}

TEST_CASE("psi_pen drops points paying penalties under both solutions") {
  Instance inst;
  inst.objective = Objective::kmeans;
  inst.k = 1;
  inst.metric.kind = MetricKind::euclidean;
  for (int x : {0, 9}) {
    Point p;
    p.id = x;
    p.coords = {Rat(x)};
    inst.points.push_back(p);
  }
  Point c1;
  c1.id = 100;
  c1.coords = {Rat(1)};
  Point c2;
  c2.id = 101;
  c2.coords = {Rat(2)};
  inst.centres = {c1, c2};
  inst.has_penalties = true;
  inst.penalties[0] = Scalar::rational(Rat(100));
  inst.penalties[9] = Scalar::rational(Rat(5));  // binds under both solutions
  inst.finalize();
  RadicalSum plain = psi(inst, {100}, {101}, false);
  RadicalSum pen = psi(inst, {100}, {101}, true);
  CHECK(plain == RadicalSum(Rat(1 + 4 + 64 + 49)));
  CHECK(pen == RadicalSum(Rat(1 + 4)));
  CHECK(pen <= plain);
}

TEST_CASE("psi properties on random penalty instances") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    Instance inst = random_instance(rng, 8, 5, 2, 2, Objective::kmeans, true);
    auto feas = enumerate_feasible(inst, 1000);
    const auto& S = feas[rng() % feas.size()];
    const auto& O = feas[rng() % feas.size()];
    CHECK(psi(inst, S, O, true) <= psi(inst, S, O, false));
    // with no binding penalties, Psi <= cost(S) + cost(O)
    Instance free_inst = inst;
    for (auto& [id, p] : free_inst.penalties) p = Scalar::rational(Rat(100000));
    free_inst.finalize();
    RadicalSum bound = cost_of(free_inst, S) + cost_of(free_inst, O);
    CHECK(psi(free_inst, S, O, false) <= bound);
  }
}

namespace {

// test-side re-derivation of the partition predicates, straight off the case
// analysis: classify by sigma membership and the two penalty guards
int classify_reference(const Instance& inst, int pid, const std::vector<int>& S,
                       const std::vector<int>& O) {
  std::set<int> sset(S.begin(), S.end()), oset(O.begin(), O.end());
  int ss = nearest_centre(inst, pid, S), so = nearest_centre(inst, pid, O);
  size_t j = inst.point_index(pid);
  const Scalar& pen = inst.penalty_of(pid);
  bool u = inst.assign_cost(j, inst.centre_index(ss)) < pen;
  bool v = inst.assign_cost(j, inst.centre_index(so)) < pen;
  bool s_in_both = oset.count(ss) > 0, o_in_both = sset.count(so) > 0;
  if ((s_in_both && o_in_both) || (!u && !v)) return 3;
  if (!s_in_both && !o_in_both && u && v) return 4;
  if (!s_in_both && u) return 1;
  return 2;
}

}  // namespace

TEST_CASE("partition is a partition and matches the re-derivation") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    Instance inst = random_instance(rng, 8, 6, 2, 2, Objective::kmeans, true);
    auto feas = enumerate_feasible(inst, 1000);
    const auto& S = feas[rng() % feas.size()];
    const auto& O = feas[rng() % feas.size()];
    auto parts = partition_x1_x4(inst, S, O);
    std::set<int> all;
    size_t total = 0;
    for (const auto& part : parts) {
      total += part.size();
      all.insert(part.begin(), part.end());
    }
    CHECK(total == inst.points.size());
    CHECK(all.size() == inst.points.size());
    for (int c = 0; c < 4; ++c)
      for (int pid : parts[c]) CHECK(classify_reference(inst, pid, S, O) == c + 1);
    // where the paper's literal bullets fire, agree with them
    std::set<int> sset(S.begin(), S.end()), oset(O.begin(), O.end());
    for (const Point& p : inst.points) {
      int ss = nearest_centre(inst, p.id, S), so = nearest_centre(inst, p.id, O);
      size_t j = inst.point_index(p.id);
      const Scalar& pen = inst.penalty_of(p.id);
      bool u = inst.assign_cost(j, inst.centre_index(ss)) < pen;
      bool v = inst.assign_cost(j, inst.centre_index(so)) < pen;
      auto in = [&](const std::vector<int>& part) {
        return std::count(part.begin(), part.end(), p.id) > 0;
      };
      if (!oset.count(ss) && sset.count(so) && u) CHECK(in(parts[0]));
      if (oset.count(ss) && !sset.count(so) && v) CHECK(in(parts[1]));
      if ((oset.count(ss) && sset.count(so)) || (!u && !v)) CHECK(in(parts[2]));
      if (!oset.count(ss) && !sset.count(so) && u && v) CHECK(in(parts[3]));
    }
  }
}

TEST_CASE("partition identity and X3 cost agreement") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    Instance inst = random_instance(rng, 8, 5, 2, 2, Objective::kmeans, true);
    auto feas = enumerate_feasible(inst, 1000);
    const auto& S = feas[rng() % feas.size()];
    const auto& O = feas[(rng() >> 7) % feas.size()];
    auto parts = partition_x1_x4(inst, S, O);
    Solution sol_s = solution_cost(inst, S);
    Solution sol_o = solution_cost(inst, O);
    RadicalSum total;
    for (const auto& part : parts)
      for (int pid : part) total += RadicalSum::of(sol_s.per_point.at(pid));
    CHECK(total == sol_s.cost);
    for (int pid : parts[2]) CHECK(sol_s.per_point.at(pid) == sol_o.per_point.at(pid));
  }
}

TEST_CASE("degenerate partitions") {
  Instance inst = small_penalty_instance();
  Instance two = inst;
  Point extra;
  extra.id = 20;
  extra.coords = {Rat(10)};
  two.centres.push_back(extra);
  two.centre_order.clear();
  two.finalize();
  auto same = partition_x1_x4(two, {0}, {0});
  CHECK(same[2].size() == 2);  // S = O puts everything in X^3
  // disjoint S, O with no penalties binding: X^4 = X
  Instance far = two;
  far.penalties[0] = Scalar::rational(Rat(1000));
  far.penalties[10] = Scalar::rational(Rat(1000));
  far.finalize();
  auto parts = partition_x1_x4(far, {0}, {20});
  CHECK(parts[3].size() == 2);
}

TEST_CASE("instance invariant validation") {
  Instance inst = line_instance();
  inst.k = 5;
  CHECK_THROWS_AS(inst.finalize(), Error);
  inst = line_instance();
  inst.points[1].id = 0;
  CHECK_THROWS_AS(inst.finalize(), Error);
  inst = line_instance();
  inst.centre_order = {0, 1, 4};
  CHECK_THROWS_AS(inst.finalize(), Error);
  inst = line_instance();
  inst.has_penalties = true;
  inst.penalties[0] = Scalar::rational(Rat(1));
  CHECK_THROWS_AS(inst.finalize(), Error);  // penalties must cover every point
  // k-means penalties must be rational
  std::mt19937_64 rng(5);
  Instance km = random_instance(rng, 4, 3, 1, 1, Objective::kmeans, true);
  km.penalties[0] = Scalar::sqrt_of(Rat(2));
  CHECK_THROWS_AS(km.finalize(), Error);
}
