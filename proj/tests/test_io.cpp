#include <random>

#include "doctest.h"
#include "skm/io.hpp"
#include "support/fixtures.hpp"

using namespace skm;
using namespace skm::testing;

namespace {

bool instances_equal(const Instance& a, const Instance& b) {
  if (a.objective != b.objective || a.k != b.k || a.metric.kind != b.metric.kind) return false;
  if (a.points.size() != b.points.size() || a.centres.size() != b.centres.size()) return false;
  auto points_equal = [](const Point& x, const Point& y) {
    return x.id == y.id && x.multiplicity == y.multiplicity && x.coords == y.coords &&
           x.lift_axis == y.lift_axis && x.lift_sq == y.lift_sq;
  };
  for (size_t i = 0; i < a.points.size(); ++i)
    if (!points_equal(a.points[i], b.points[i])) return false;
  for (size_t i = 0; i < a.centres.size(); ++i)
    if (!points_equal(a.centres[i], b.centres[i])) return false;
  if (a.has_penalties != b.has_penalties) return false;
  if (a.penalties.size() != b.penalties.size()) return false;
  for (const auto& [id, p] : a.penalties) {
    auto it = b.penalties.find(id);
    if (it == b.penalties.end() || !(it->second == p)) return false;
  }
  if (a.centre_order != b.centre_order) return false;
  if (a.metric.entries.size() != b.metric.entries.size()) return false;
  for (const auto& [key, v] : a.metric.entries) {
    auto it = b.metric.entries.find(key);
    if (it == b.metric.entries.end() || !(it->second == v)) return false;
  }
  return a.provenance == b.provenance;
}

}  // namespace

TEST_CASE("minimal instance parses") {
  std::string text =
      "skm-instance 1\n"
      "objective kmedian\n"
      "k 1\n"
      "metric euclidean\n"
      "dim 1\n"
      "points 2\n"
      "0 1 0\n"
      "1 1 7/2\n"
      "centres 1\n"
      "0 0\n"
      "end\n";
  Instance inst = parse_instance(text);
  CHECK(inst.k == 1);
  CHECK(inst.points.size() == 2);
  CHECK(inst.points[1].coords[0] == Rat(7, 2));
  CHECK_FALSE(inst.has_penalties);
}

TEST_CASE("round trip is the identity on assorted fixtures") {
  std::mt19937_64 rng(113);
  std::vector<Instance> fixtures;
  fixtures.push_back(line_instance());
  fixtures.push_back(small_penalty_instance());
  fixtures.push_back(random_instance(rng, 6, 5, 2, 3, Objective::kmeans, true));
  GridReductionSpec spec;
  spec.gt = full_grid_tiling(2, 1);
  spec.eps = Rat(1, 2);
  fixtures.push_back(build_grid_instance(spec));
  fixtures.push_back(build_cylinder_instance(spec));
  fixtures.push_back(build_pvc4_instance(path_graph(3, 1, 2)).inst);
  fixtures.push_back(build_pvc6_instance(triangle_graph(1, 2)).inst);
  // an explicit-metric instance exercises the matrix block
  Instance lifted = lift_penalties(small_penalty_instance()).lifted;
  fixtures.push_back(lifted);

  for (const Instance& inst : fixtures) {
    std::string text = serialize_instance(inst);
    Instance back = parse_instance(text);
    CHECK(instances_equal(inst, back));
    // serialization is canonical: a second round trip is byte-identical
    CHECK(serialize_instance(back) == text);
  }
}

TEST_CASE("penalty tokens survive exactly") {
  Instance pv = build_pvc4_instance(path_graph(3, 1, 2)).inst;
  std::string text = serialize_instance(pv);
  CHECK(text.find("pen sqrt(") != std::string::npos);
  Instance back = parse_instance(text);
  CHECK(back.penalties.at(0) == pv.penalties.at(0));
  // rational penalty prints as a plain rational
  std::string small = serialize_instance(small_penalty_instance());
  CHECK(small.find("pen 3") != std::string::npos);
}

TEST_CASE("parser rejections carry line numbers") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_instance(text);
      FAIL_CHECK("expected parse error for: " << needle);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::parse);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("bogus\n", "skm-instance");
  std::string base =
      "skm-instance 1\nobjective kmedian\nk 1\nmetric euclidean\ndim 1\n";
  expect_error(base + "points 1\n0 1 1/0\ncentres 1\n0 0\nend\n", "line 7");
  expect_error(base + "points 1\n0 1 x\ncentres 1\n0 0\nend\n", "line 7");
  expect_error(base + "points 1\n0 1 0 pen -3\ncentres 1\n0 0\nend\n", "penalty");
  expect_error(base + "points 2\n0 1 0 pen 1\n1 1 2\ncentres 1\n0 0\nend\n", "every point");
  expect_error(base + "points 1\n0 1 0\ncentres 1\n0 0\n", "missing 'end'");
  expect_error(base + "points 1\n0 1 0 0\ncentres 1\n0 0\nend\n", "coordinates");
  // duplicate ids surface through instance validation
  expect_error(base + "points 2\n0 1 0\n0 1 2\ncentres 1\n0 0\nend\n", "duplicate");
}

TEST_CASE("grid tiling and graph formats") {
  GridTilingInstance gt = unsolvable_grid_tiling();
  std::string text = serialize_grid_tiling(gt);
  GridTilingInstance back = parse_grid_tiling(text);
  CHECK(back.n == gt.n);
  CHECK(back.k == gt.k);
  CHECK(back.sets == gt.sets);
  CHECK_THROWS_AS(parse_grid_tiling("gridtiling 2\n"), Error);

  PvcGraph g = parse_graph("4 3 2 3\n1 2\n2 3\n3 4\n");
  CHECK(g.n_vertices == 4);
  CHECK(g.edges.size() == 3);
  CHECK(g.k == 2);
  CHECK(g.s == 3);
  CHECK_THROWS_AS(parse_graph("2 1 1 1\n1 1\n"), Error);  // self loop
  CHECK_THROWS_AS(parse_graph("2 1\n"), Error);
}

TEST_CASE("trace serialization") {
  Instance inst = line_instance();
  SearchConfig cfg;
  cfg.rho = 1;
  cfg.seed_solution = std::vector<int>{0, 1};
  auto [sol, trace] = rho_swap_search(inst, cfg);
  std::string text = serialize_trace(trace);
  CHECK(text.find("skm-trace 1") == 0);
  CHECK(text.find("step 0") != std::string::npos);
  CHECK(text.find("reason local_opt") != std::string::npos);
  CHECK(text.find("cost 2 ") != std::string::npos);
}
