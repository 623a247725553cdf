// Exercises the shared-library surface the CLI is built on.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "doctest.h"
#include "stablekm.h"

namespace {

const char* kLineInstance =
    "skm-instance 1\n"
    "objective kmedian\n"
    "k 2\n"
    "metric euclidean\n"
    "dim 1\n"
    "points 4\n"
    "0 1 0\n"
    "1 1 1\n"
    "4 1 4\n"
    "5 1 5\n"
    "centres 4\n"
    "0 0\n"
    "1 1\n"
    "4 4\n"
    "5 5\n"
    "end\n";

const char* kPenaltyInstance =
    "skm-instance 1\n"
    "objective kmedian\n"
    "k 1\n"
    "metric euclidean\n"
    "dim 1\n"
    "points 2\n"
    "0 1 0 pen 5\n"
    "10 1 10 pen 3\n"
    "centres 1\n"
    "0 0\n"
    "end\n";

struct Text {
  char* p = nullptr;
  ~Text() { skm_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

}  // namespace

TEST_CASE("parse, inspect, serialize") {
  skm_instance* inst = nullptr;
  REQUIRE(skm_instance_parse(kLineInstance, &inst) == SKM_OK);
  CHECK(skm_instance_k(inst) == 2);
  CHECK(skm_instance_num_points(inst) == 4);
  CHECK(skm_instance_num_centres(inst) == 4);
  CHECK(skm_instance_has_penalties(inst) == 0);
  Text text;
  REQUIRE(skm_instance_serialize(inst, &text.p) == SKM_OK);
  skm_instance* again = nullptr;
  REQUIRE(skm_instance_parse(text.p, &again) == SKM_OK);
  Text text2;
  REQUIRE(skm_instance_serialize(again, &text2.p) == SKM_OK);
  CHECK(text.str() == text2.str());
  skm_instance_free(inst);
  skm_instance_free(again);
}

TEST_CASE("parse errors set status and message") {
  skm_instance* inst = nullptr;
  CHECK(skm_instance_parse("not an instance\n", &inst) == SKM_ERR_PARSE);
  CHECK(std::strlen(skm_last_error()) > 0);
  CHECK(skm_instance_parse(nullptr, &inst) == SKM_ERR_INVALID);
}

TEST_CASE("oracle and local search agree on the line instance") {
  skm_instance* inst = nullptr;
  REQUIRE(skm_instance_parse(kLineInstance, &inst) == SKM_OK);
  skm_optima* opt = nullptr;
  REQUIRE(skm_oracle_solve(inst, 0, 1, &opt) == SKM_OK);
  Text cost;
  skm_optima_cost(opt, &cost.p);
  CHECK(cost.str() == "2");
  CHECK(skm_optima_count(opt) == 4);
  Text first;
  skm_optima_solution(opt, 0, &first.p);
  CHECK(first.str() == "0 4");
  char* oob = nullptr;
  CHECK(skm_optima_solution(opt, 99, &oob) == SKM_ERR_INVALID);

  skm_search_options opts{};
  opts.rho = 1;
  opts.seed_centres = "0 1";
  skm_solution* sol = nullptr;
  Text trace;
  REQUIRE(skm_solve_local(inst, &opts, &sol, &trace.p) == SKM_OK);
  Text scost;
  skm_solution_cost(sol, &scost.p);
  CHECK(scost.str() == "2");
  CHECK(trace.str().find("skm-trace 1") == 0);
  CHECK(skm_solution_cost_approx(sol) == doctest::Approx(2.0));
  skm_solution_free(sol);
  skm_optima_free(opt);
  skm_instance_free(inst);
}

TEST_CASE("penalty instances lift and solve through the C surface") {
  skm_instance* inst = nullptr;
  REQUIRE(skm_instance_parse(kPenaltyInstance, &inst) == SKM_OK);
  CHECK(skm_instance_has_penalties(inst) == 1);
  skm_instance* lifted = nullptr;
  int dummy = -1;
  REQUIRE(skm_instance_lift(inst, &lifted, &dummy) == SKM_OK);
  CHECK(skm_instance_k(lifted) == 2);
  CHECK(dummy > 0);
  skm_solution* sol = nullptr;
  REQUIRE(skm_solve_local(inst, nullptr, &sol, nullptr) == SKM_OK);
  Text cost, centres;
  skm_solution_cost(sol, &cost.p);
  skm_solution_centres(sol, &centres.p);
  CHECK(cost.str() == "3");
  CHECK(centres.str() == "0");
  skm_solution_free(sol);
  skm_instance_free(lifted);
  skm_instance_free(inst);
}

TEST_CASE("stability verdicts through the C surface") {
  const char* two_optima =
      "skm-instance 1\nobjective kmedian\nk 1\nmetric euclidean\ndim 1\n"
      "points 2\n0 1 0\n1 1 1\ncentres 2\n0 0\n1 1\nend\n";
  skm_instance* inst = nullptr;
  REQUIRE(skm_instance_parse(two_optima, &inst) == SKM_OK);
  int violated = -1;
  Text report;
  REQUIRE(skm_falsify_stability(inst, "11/10", "0", 10, 1, 0, 1, &violated, &report.p) ==
          SKM_OK);
  CHECK(violated == 1);
  CHECK(report.str().find("status violated") != std::string::npos);
  int certified = -1;
  Text report2;
  REQUIRE(skm_certify_stable_family(inst, "1", 0, &certified, &report2.p) == SKM_OK);
  CHECK(certified == 1);
  skm_instance_free(inst);
}

TEST_CASE("generators and reduction certificates through the C surface") {
  skm_instance* inst = nullptr;
  REQUIRE(skm_gen_pvc4("3 2 1 2\n1 2\n2 3\n", 0, &inst) == SKM_OK);
  CHECK(skm_instance_k(inst) == 1);
  CHECK(skm_instance_num_points(inst) == 2);
  int equivalent = -1;
  Text report;
  REQUIRE(skm_certify_reduction(inst, "pvc4", 0, &equivalent, &report.p) == SKM_OK);
  CHECK(equivalent == 1);
  CHECK(report.str().find("equivalent yes") != std::string::npos);
  // variant mismatch is rejected
  int eq2 = -1;
  CHECK(skm_certify_reduction(inst, "pvc6", 0, &eq2, nullptr) == SKM_ERR_INVALID);
  skm_instance_free(inst);

  skm_instance* grid = nullptr;
  const char* tiling = "gridtiling 1\nn 2\nk 1\nset 1 1 : 1,1 2,1\nend\n";
  REQUIRE(skm_gen_grid(tiling, "1/2", &grid) == SKM_OK);
  CHECK(skm_instance_num_points(grid) == 36);
  int geq = -1;
  REQUIRE(skm_certify_reduction(grid, "grid", 0, &geq, nullptr) == SKM_OK);
  CHECK(geq == 1);
  skm_instance_free(grid);

  skm_instance* cyl = nullptr;
  REQUIRE(skm_gen_cylinder(tiling, "1/2", &cyl) == SKM_OK);
  CHECK(skm_instance_k(cyl) == 3);
  skm_instance_free(cyl);

  skm_instance* pvc6 = nullptr;
  REQUIRE(skm_gen_pvc6("3 3 1 2\n1 2\n1 3\n2 3\n", 0, &pvc6) == SKM_OK);
  int eq6 = -1;
  REQUIRE(skm_certify_reduction(pvc6, "pvc6", 0, &eq6, nullptr) == SKM_OK);
  CHECK(eq6 == 1);
  skm_instance_free(pvc6);
}

TEST_CASE("cost-drop and nearly-good reports through the C surface") {
  skm_instance* inst = nullptr;
  REQUIRE(skm_instance_parse(kLineInstance, &inst) == SKM_OK);
  int ok = -1;
  Text report;
  REQUIRE(skm_verify_cost_drop(inst, "1/10", 0, &ok, &report.p) == SKM_OK);
  CHECK(ok == 1);
  CHECK(report.str().find("status ok") != std::string::npos);
  int ng = -1;
  Text report2;
  REQUIRE(skm_certify_nearly_good(inst, "0", 0, &ng, &report2.p) == SKM_OK);
  CHECK(ng == 1);
  skm_instance_free(inst);
}

TEST_CASE("lemma checks through the C surface") {
  int ok = -1;
  Text report;
  REQUIRE(skm_check_sphere_lemmas(4, &ok, &report.p) == SKM_OK);
  CHECK(ok == 1);
  CHECK(report.str().find("status ok") != std::string::npos);
  int mok = -1;
  REQUIRE(skm_check_measure_lemma("1/2", "1/50", &mok, nullptr) == SKM_OK);
  CHECK(mok == 1);
  CHECK(skm_check_measure_lemma("2", "1/50", &mok, nullptr) == SKM_ERR_INVALID);
}
