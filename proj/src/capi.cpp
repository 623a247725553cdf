#include "stablekm.h"

#include <cstring>
#include <sstream>

#include "skm/io.hpp"
#include "skm/stability.hpp"

using namespace skm;

struct skm_instance {
  Instance inst;
};
struct skm_solution {
  Solution sol;
};
struct skm_optima {
  OptimaSet opt;
};

namespace {

thread_local std::string g_last_error;

int set_error(const Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case Errc::parse: return SKM_ERR_PARSE;
    case Errc::invalid_argument: return SKM_ERR_INVALID;
    case Errc::budget_exceeded: return SKM_ERR_BUDGET;
    case Errc::missing_entry: return SKM_ERR_MISSING_ENTRY;
    case Errc::numeric: return SKM_ERR_NUMERIC;
  }
  return SKM_ERR_INTERNAL;
}

int set_error(const std::exception& e) {
  g_last_error = e.what();
  return SKM_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return SKM_OK;
  } catch (const Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error(e);
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int require(bool cond, const char* msg) {
  if (cond) return SKM_OK;
  g_last_error = msg;
  return SKM_ERR_INVALID;
}

std::string ids_string(const std::vector<int>& ids) {
  std::ostringstream os;
  for (size_t i = 0; i < ids.size(); ++i) os << (i ? " " : "") << ids[i];
  return os.str();
}

std::string pert_string(const Perturbation& pert) {
  std::ostringstream os;
  os << "alpha " << rat_to_string(pert.alpha) << "\n";
  os << "scales " << pert.scale.size() << "\n";
  for (const auto& [key, f] : pert.scale)
    os << key.first << " " << key.second << " " << rat_to_string(f) << "\n";
  if (pert.penalty_scale) {
    os << "penalty_scales " << pert.penalty_scale->size() << "\n";
    for (const auto& [id, f] : *pert.penalty_scale)
      os << id << " " << rat_to_string(f) << "\n";
  }
  return os.str();
}

}  // namespace

extern "C" {

const char* skm_version(void) { return "stablekm 1.0.0"; }

const char* skm_last_error(void) { return g_last_error.c_str(); }

void skm_string_free(char* s) { std::free(s); }

int skm_instance_parse(const char* text, skm_instance** out) {
  if (int rc = require(text && out, "null argument")) return rc;
  return guarded([&] { *out = new skm_instance{parse_instance(text)}; });
}

int skm_instance_serialize(const skm_instance* inst, char** out_text) {
  if (int rc = require(inst && out_text, "null argument")) return rc;
  return guarded([&] { *out_text = dup_string(serialize_instance(inst->inst)); });
}

void skm_instance_free(skm_instance* inst) { delete inst; }

int skm_instance_k(const skm_instance* inst) { return inst ? inst->inst.k : -1; }

int skm_instance_num_points(const skm_instance* inst) {
  return inst ? static_cast<int>(inst->inst.points.size()) : -1;
}

int skm_instance_num_centres(const skm_instance* inst) {
  return inst ? static_cast<int>(inst->inst.centres.size()) : -1;
}

int skm_instance_has_penalties(const skm_instance* inst) {
  return inst ? (inst->inst.has_penalties ? 1 : 0) : -1;
}

int skm_instance_lift(const skm_instance* inst, skm_instance** lifted, int* dummy_id) {
  if (int rc = require(inst && lifted, "null argument")) return rc;
  return guarded([&] {
    AugmentedInstance aug = lift_penalties(inst->inst);
    if (dummy_id) *dummy_id = aug.dummy_id;
    *lifted = new skm_instance{std::move(aug.lifted)};
  });
}

int skm_gen_grid(const char* grid_tiling_text, const char* eps, skm_instance** out) {
  if (int rc = require(grid_tiling_text && eps && out, "null argument")) return rc;
  return guarded([&] {
    GridReductionSpec spec;
    spec.gt = parse_grid_tiling(grid_tiling_text);
    spec.eps = rat_from_string(eps);
    *out = new skm_instance{build_grid_instance(spec)};
  });
}

int skm_gen_cylinder(const char* grid_tiling_text, const char* eps, skm_instance** out) {
  if (int rc = require(grid_tiling_text && eps && out, "null argument")) return rc;
  return guarded([&] {
    GridReductionSpec spec;
    spec.gt = parse_grid_tiling(grid_tiling_text);
    spec.eps = rat_from_string(eps);
    *out = new skm_instance{build_cylinder_instance(spec)};
  });
}

static int gen_pvc(const char* graph_text, int k_override, int variant, skm_instance** out) {
  if (int rc = require(graph_text && out, "null argument")) return rc;
  return guarded([&] {
    PvcGraph g = parse_graph(graph_text);
    if (k_override > 0) g.k = k_override;
    g.validate();
    PvcInstance pv = variant == 4 ? build_pvc4_instance(g) : build_pvc6_instance(g);
    *out = new skm_instance{std::move(pv.inst)};
  });
}

int skm_gen_pvc4(const char* graph_text, int k_override, skm_instance** out) {
  return gen_pvc(graph_text, k_override, 4, out);
}

int skm_gen_pvc6(const char* graph_text, int k_override, skm_instance** out) {
  return gen_pvc(graph_text, k_override, 6, out);
}

int skm_solve_local(const skm_instance* inst, const skm_search_options* opts, skm_solution** out,
                    char** trace_text) {
  if (int rc = require(inst && out, "null argument")) return rc;
  return guarded([&] {
    SearchConfig cfg;
    if (opts) {
      if (opts->rho > 0) cfg.rho = opts->rho;
      if (opts->max_iters) cfg.max_iters = opts->max_iters;
      if (opts->neighbor_budget) cfg.neighbor_budget = opts->neighbor_budget;
      cfg.force = opts->force != 0;
      if (opts->seed_centres) {
        std::istringstream is(opts->seed_centres);
        std::vector<int> seed;
        int id;
        while (is >> id) seed.push_back(id);
        cfg.seed_solution = seed;
      }
    }
    Solution sol;
    SearchTrace trace;
    if (inst->inst.has_penalties) {
      AugmentedInstance aug = lift_penalties(inst->inst);
      if (cfg.seed_solution)
        for (int& id : *cfg.seed_solution) id = aug.lifted_centre_id(id);
      auto [lifted_sol, tr] = rho_swap_search(aug, cfg);
      sol = solution_cost(inst->inst, aug.restrict_to_base(lifted_sol.centres));
      trace = std::move(tr);
    } else {
      auto [s, tr] = rho_swap_search(inst->inst, cfg);
      sol = std::move(s);
      trace = std::move(tr);
    }
    if (trace_text) *trace_text = dup_string(serialize_trace(trace));
    *out = new skm_solution{std::move(sol)};
  });
}

void skm_solution_free(skm_solution* sol) { delete sol; }

int skm_solution_cost(const skm_solution* sol, char** out) {
  if (int rc = require(sol && out, "null argument")) return rc;
  *out = dup_string(sol->sol.cost.str());
  return SKM_OK;
}

double skm_solution_cost_approx(const skm_solution* sol) {
  return sol ? sol->sol.cost.approx() : -1;
}

int skm_solution_centres(const skm_solution* sol, char** out) {
  if (int rc = require(sol && out, "null argument")) return rc;
  *out = dup_string(ids_string(sol->sol.centres));
  return SKM_OK;
}

int skm_oracle_solve(const skm_instance* inst, uint64_t budget, int jobs, skm_optima** out) {
  if (int rc = require(inst && out, "null argument")) return rc;
  return guarded([&] {
    uint64_t b = budget ? budget : 10000000ULL;
    *out = new skm_optima{solve_exact(inst->inst, b, jobs > 0 ? jobs : 1)};
  });
}

void skm_optima_free(skm_optima* opt) { delete opt; }

int skm_optima_cost(const skm_optima* opt, char** out) {
  if (int rc = require(opt && out, "null argument")) return rc;
  *out = dup_string(opt->opt.optimal_cost.str());
  return SKM_OK;
}

double skm_optima_cost_approx(const skm_optima* opt) {
  return opt ? opt->opt.optimal_cost.approx() : -1;
}

size_t skm_optima_count(const skm_optima* opt) { return opt ? opt->opt.solutions.size() : 0; }

int skm_optima_solution(const skm_optima* opt, size_t index, char** out) {
  if (int rc = require(opt && out, "null argument")) return rc;
  if (int rc = require(index < opt->opt.solutions.size(), "optima index out of range")) return rc;
  *out = dup_string(ids_string(opt->opt.solutions[index]));
  return SKM_OK;
}

int skm_falsify_stability(const skm_instance* inst, const char* alpha, const char* beta,
                          uint64_t random_trials, uint64_t seed, uint64_t oracle_budget,
                          int jobs, int* violated, char** report) {
  if (int rc = require(inst && alpha && beta && violated, "null argument")) return rc;
  return guarded([&] {
    StabilityVerdict v =
        falsify_stability(inst->inst, rat_from_string(alpha), rat_from_string(beta),
                          random_trials, seed, oracle_budget ? oracle_budget : 10000000ULL,
                          jobs > 0 ? jobs : 1);
    *violated = v.violated ? 1 : 0;
    if (report) {
      std::ostringstream os;
      os << "skm-report verify-stability 1\n";
      os << "alpha " << rat_to_string(v.alpha) << "\n";
      os << "beta " << rat_to_string(v.beta) << "\n";
      os << "trials " << v.trials_run << "\n";
      os << "status " << (v.violated ? "violated" : "no_violation_found") << "\n";
      os << "max_dist " << v.max_dist.str() << "\n";
      os << "max_dist_approx " << v.max_dist.approx() << "\n";
      if (v.violated) {
        os << "witness_original_optimum " << ids_string(*v.witness_original_optimum) << "\n";
        os << "witness_perturbed_optimum " << ids_string(*v.witness_perturbed_optimum) << "\n";
        os << "witness_perturbation\n" << pert_string(*v.witness_pert);
      }
      os << "end\n";
      *report = dup_string(os.str());
    }
  });
}

int skm_certify_stable_family(const skm_instance* inst, const char* alpha,
                              uint64_t oracle_budget, int* certified, char** report) {
  if (int rc = require(inst && alpha && certified, "null argument")) return rc;
  return guarded([&] {
    FamilyCertificate cert = certify_stable_family(
        inst->inst, rat_from_string(alpha), oracle_budget ? oracle_budget : 10000000ULL);
    *certified = cert.stable_on_family ? 1 : 0;
    if (report) {
      std::ostringstream os;
      os << "skm-report certify-stable-family 1\n";
      os << "alpha " << alpha << "\n";
      os << "perturbations " << cert.perturbations_checked << "\n";
      os << "status " << (cert.stable_on_family ? "stable_on_family" : "violated") << "\n";
      if (!cert.stable_on_family) {
        os << "witness_reference " << ids_string(*cert.witness_reference) << "\n";
        os << "witness_optimum " << ids_string(*cert.witness_optimum) << "\n";
      }
      os << "end\n";
      *report = dup_string(os.str());
    }
  });
}

int skm_certify_reduction(const skm_instance* inst, const char* variant, uint64_t budget,
                          int* equivalent, char** report) {
  if (int rc = require(inst && variant && equivalent, "null argument")) return rc;
  return guarded([&] {
    std::string var = variant;
    uint64_t b = budget ? budget : 10000000ULL;
    auto prov = [&](const std::string& key) -> std::string {
      for (const auto& [k, v] : inst->inst.provenance)
        if (k == key) return v;
      fail(Errc::invalid_argument, "instance provenance lacks '" + key + "'");
    };
    std::string source = prov("source");
    if (source != var)
      fail(Errc::invalid_argument,
           "instance was generated as '" + source + "', not '" + var + "'");
    ReductionCertificate cert;
    if (var == "grid" || var == "cylinder") {
      GridReductionSpec spec;
      spec.gt.n = std::stoi(prov("n"));
      spec.gt.k = std::stoi(prov("k"));
      spec.eps = rat_from_string(prov("eps"));
      for (const auto& [k, v] : inst->inst.provenance) {
        if (k != "set") continue;
        std::istringstream is(v);
        int i, j;
        std::string colon, pair;
        is >> i >> j >> colon;
        std::vector<std::pair<int, int>> pairs;
        while (is >> pair) {
          auto comma = pair.find(',');
          pairs.emplace_back(std::stoi(pair.substr(0, comma)),
                             std::stoi(pair.substr(comma + 1)));
        }
        spec.gt.sets[{i, j}] = pairs;
      }
      cert = certify_grid_equivalence(spec, b, var == "cylinder");
    } else if (var == "pvc4" || var == "pvc6") {
      PvcGraph g;
      g.n_vertices = std::stoi(prov("n"));
      g.k = std::stoi(prov("k"));
      g.s = std::stoi(prov("s"));
      std::istringstream is(prov("edges"));
      std::string tok;
      while (is >> tok) {
        auto dash = tok.find('-');
        g.edges.emplace_back(std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1)));
      }
      cert = certify_pvc_equivalence(g, var == "pvc4" ? 4 : 6, b);
    } else {
      fail(Errc::invalid_argument, "unknown reduction variant '" + var + "'");
    }
    *equivalent = cert.equivalent ? 1 : 0;
    if (report) {
      std::ostringstream os;
      os << "skm-report certify-reduction 1\n";
      os << "variant " << cert.variant << "\n";
      os << "source_solvable " << (cert.source_solvable ? "yes" : "no") << "\n";
      os << "threshold " << cert.threshold << "\n";
      os << "clustering_optimum " << cert.clustering_optimum << "\n";
      os << "equivalent " << (cert.equivalent ? "yes" : "no") << "\n";
      for (const auto& d : cert.detail) os << "note " << d << "\n";
      os << "end\n";
      *report = dup_string(os.str());
    }
  });
}

int skm_verify_cost_drop(const skm_instance* inst, const char* eps, uint64_t budget, int* ok,
                         char** report) {
  if (int rc = require(inst && eps && ok, "null argument")) return rc;
  return guarded([&] {
    CostDropReport rep = verify_cost_drop_theorem(inst->inst, rat_from_string(eps),
                                                  budget ? budget : 10000000ULL);
    *ok = rep.ok() ? 1 : 0;
    if (report) {
      std::ostringstream os;
      os << "skm-report verify-cost-drop 1\n";
      os << "eps " << eps << "\n";
      os << "feasible " << rep.feasible_solutions << "\n";
      os << "premise_pairs " << rep.premise_pairs << "\n";
      os << "verified_pairs " << rep.verified_pairs << "\n";
      os << "max_min_rho " << rep.max_min_rho << "\n";
      for (const auto& [rho, count] : rep.min_rho_histogram)
        os << "witnesses_at_rho " << rho << " " << count << "\n";
      for (const auto& [s, o] : rep.counterexamples)
        os << "counterexample {" << ids_string(s) << "} {" << ids_string(o) << "}\n";
      os << "status " << (rep.ok() ? "ok" : "failed") << "\n";
      os << "end\n";
      *report = dup_string(os.str());
    }
  });
}

int skm_certify_nearly_good(const skm_instance* inst, const char* eps, uint64_t budget, int* ok,
                            char** report) {
  if (int rc = require(inst && eps && ok, "null argument")) return rc;
  return guarded([&] {
    NearlyGoodCertReport rep = certify_nearly_good_implies_optimal(
        inst->inst, rat_from_string(eps), budget ? budget : 10000000ULL);
    *ok = rep.ok() ? 1 : 0;
    if (report) {
      std::ostringstream os;
      os << "skm-report certify-nearly-good 1\n";
      os << "eps " << eps << "\n";
      os << "feasible " << rep.feasible_solutions << "\n";
      os << "nearly_good " << rep.nearly_good_count << "\n";
      for (const auto& v : rep.violations) os << "violation " << ids_string(v) << "\n";
      os << "status " << (rep.ok() ? "ok" : "failed") << "\n";
      os << "end\n";
      *report = dup_string(os.str());
    }
  });
}

int skm_check_sphere_lemmas(int n_max, int* ok, char** report) {
  if (int rc = require(ok, "null argument")) return rc;
  return guarded([&] {
    if (n_max < 2) fail(Errc::invalid_argument, "n_max must be >= 2");
    bool all_ok = true;
    std::ostringstream os;
    os << "skm-report check-spheres 1\n";
    unsigned long long fits = 0, clearance_points = 0;
    for (int i = 1; i < n_max && all_ok; ++i) {
      for (int j = i + 1; j <= n_max && all_ok; ++j) {
        SphereFit f3 = fit_sphere_3d(Rat(i), Rat(j));
        Point z;
        z.coords = {Rat(1), Rat(1), Rat(1), Rat(1)};
        SphereFit f4 = fit_sphere_4d(Rat(1), Rat(i + 1), Rat(j + 1), z);
        fits += 2;
        // defining residuals, exactly zero
        if (sphere_clearance_value(f3, Rat(i)) != 0 || sphere_clearance_value(f3, Rat(j)) != 0 ||
            sphere_tangency_residual(f3, Rat(i)) != 0 ||
            sphere_tangency_residual(f3, Rat(j)) != 0)
          all_ok = false;
        Rat zdist = 0;
        for (const Rat& c : f4.centre) zdist += (1 - c) * (1 - c);
        if (sphere_clearance_value(f4, Rat(i + 1)) != 0 ||
            sphere_clearance_value(f4, Rat(j + 1)) != 0 ||
            sphere_tangency_residual(f4, Rat(i + 1)) != 0 ||
            sphere_tangency_residual(f4, Rat(j + 1)) != 0 || zdist != f4.radius_sq)
          all_ok = false;
        // quarter-integrality gaps at integer curve parameters
        for (int t = 1; t <= n_max && all_ok; ++t) {
          if (t != i && t != j && sphere_clearance_value(f3, Rat(t)) < Rat(1, 4)) all_ok = false;
          if (t != i && t != j && sphere_clearance_value(f4, Rat(t + 1)) < Rat(1, 4))
            all_ok = false;
        }
        // strict clearance along the lemma intervals
        for (const SphereFit* f : {&f3, &f4}) {
          auto grid = canonical_clearance_grid(*f, n_max);
          auto rep = sphere_curve_clearance(*f, grid);
          clearance_points += rep.checked;
          if (!rep.all_positive) all_ok = false;
        }
      }
    }
    os << "pairs 1<=i<j<=" << n_max << "\n";
    os << "fits " << fits << "\n";
    os << "clearance_points " << clearance_points << "\n";
    os << "status " << (all_ok ? "ok" : "failed") << "\n";
    os << "end\n";
    *ok = all_ok ? 1 : 0;
    if (report) *report = dup_string(os.str());
  });
}

int skm_check_measure_lemma(const char* r, const char* eps, int* ok, char** report) {
  if (int rc = require(r && eps && ok, "null argument")) return rc;
  return guarded([&] {
    Point a;
    a.coords = {Rat(1), Rat(1)};
    MeasureReport rep = measure_approx_check(a, rat_from_string(r), rat_from_string(eps));
    *ok = rep.ok() ? 1 : 0;
    if (report) {
      std::ostringstream os;
      os << "skm-report check-measure 1\n";
      os << "r " << rat_to_string(rep.r) << "\n";
      os << "eps " << rat_to_string(rep.eps) << "\n";
      os << "lattice_count " << rep.lattice_count << "\n";
      os << "count_bounds " << rep.count_lower << " " << rep.count_upper << "\n";
      os << "sum_dist " << rep.sum_dist << "\n";
      os << "dist_upper " << rep.dist_upper << "\n";
      os << "status " << (rep.ok() ? "ok" : "failed") << "\n";
      os << "end\n";
      *report = dup_string(os.str());
    }
  });
}

}  // extern "C"
