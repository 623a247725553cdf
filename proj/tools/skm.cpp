// skm: command-line driver for the stablekm shared library.
// Exit codes: 0 success, 1 verdict-negative, 2 usage/input error, 3 budget exceeded.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stablekm.h"

namespace {

enum ExitCode { kOk = 0, kVerdictNegative = 1, kUsage = 2, kBudget = 3 };

int status_to_exit(int rc) {
  switch (rc) {
    case SKM_OK: return kOk;
    case SKM_ERR_BUDGET: return kBudget;
    default: return kUsage;
  }
}

int report_failure(int rc) {
  std::cerr << "error: " << skm_last_error() << "\n";
  return status_to_exit(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << content;
  return true;
}

struct InstanceHandle {
  skm_instance* ptr = nullptr;
  ~InstanceHandle() { skm_instance_free(ptr); }
};

struct StringHandle {
  char* ptr = nullptr;
  ~StringHandle() { skm_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

int load_instance(const std::string& path, InstanceHandle& h) {
  return skm_instance_parse(slurp(path).c_str(), &h.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable k-means/k-median toolkit"};
  app.require_subcommand(1);

  std::string instance_path, graph_path, tiling_path, out_path, variant, which = "all";
  std::string eps = "1/2", alpha = "11/10", beta = "0", seed_centres;
  int k = 0, rho = 2, jobs = 1, nmax = 8;
  std::uint64_t budget = 0, trials = 1000, seed = 1, max_iters = 0;
  bool force = false, family = false;

  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("--instance", instance_path, "instance file")->required();
  };
  auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--budget", budget, "subset-evaluation budget (default 10^7)");
  };
  auto add_jobs = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", jobs, "worker threads (output independent of N)");
  };

  auto* gen_grid = app.add_subcommand("gen-grid", "grid tiling -> penalty k^2-median instance");
  gen_grid->add_option("--tiling", tiling_path, "grid tiling file")->required();
  gen_grid->add_option("--eps", eps, "lattice spacing (1/eps integral)");
  gen_grid->add_option("--out", out_path, "output instance path")->required();

  auto* gen_cyl =
      app.add_subcommand("gen-cylinder", "grid tiling -> cylinder-metric 3k^2-median instance");
  gen_cyl->add_option("--tiling", tiling_path, "grid tiling file")->required();
  gen_cyl->add_option("--eps", eps, "lattice spacing (1/eps integral)");
  gen_cyl->add_option("--out", out_path, "output instance path")->required();

  auto* gen_pvc4 = app.add_subcommand("gen-pvc4", "graph -> penalty k-median in R^4");
  gen_pvc4->add_option("--graph", graph_path, "edge list with 'n m k s' header")->required();
  gen_pvc4->add_option("--k", k, "override k from the graph header");
  gen_pvc4->add_option("--out", out_path, "output instance path")->required();

  auto* gen_pvc6 = app.add_subcommand("gen-pvc6", "graph -> (k+1)-median in R^6, no penalties");
  gen_pvc6->add_option("--graph", graph_path, "edge list with 'n m k s' header")->required();
  gen_pvc6->add_option("--k", k, "override k from the graph header");
  gen_pvc6->add_option("--out", out_path, "output instance path")->required();

  auto* solve = app.add_subcommand("solve", "rho-swap local search");
  add_instance(solve);
  solve->add_option("--rho", rho, "swap size (default 2)");
  solve->add_option("--max-iters", max_iters, "iteration cap (0 = none)");
  solve->add_option("--seed-solution", seed_centres, "space-separated centre ids");
  solve->add_flag("--force", force, "override the neighbourhood-size refusal");
  solve->add_option("--out", out_path, "write the search trace here");

  auto* oracle = app.add_subcommand("oracle", "exhaustive exact optimum");
  add_instance(oracle);
  add_budget(oracle);
  add_jobs(oracle);

  auto* verify = app.add_subcommand("verify-stability", "stability falsifier / family certifier");
  add_instance(verify);
  verify->add_option("--alpha", alpha, "perturbation bound, rational >= 1")->required();
  verify->add_option("--beta", beta, "dist_bij bound (falsifier only)");
  verify->add_option("--trials", trials, "random perturbation trials");
  verify->add_option("--seed", seed, "PRNG seed for random perturbations");
  verify->add_flag("--family", family, "certify over the canonical family instead");
  add_budget(verify);
  add_jobs(verify);
  verify->add_option("--out", out_path, "write the verdict report here");

  auto* certify = app.add_subcommand("certify-reduction", "source-vs-clustering equivalence");
  add_instance(certify);
  certify->add_option("--variant", variant, "grid | cylinder | pvc4 | pvc6")->required();
  add_budget(certify);
  certify->add_option("--out", out_path, "write the certificate report here");

  auto* lemmas = app.add_subcommand("check-lemmas", "sphere and measure lemma regression checks");
  lemmas->add_option("--which", which, "all | spheres | measure");
  lemmas->add_option("--nmax", nmax, "sphere fits for 1 <= i < j <= nmax");

  auto* bench = app.add_subcommand("bench", "time oracle vs local search on an instance");
  add_instance(bench);
  bench->add_option("--rho", rho, "swap size (default 2)");
  add_budget(bench);
  add_jobs(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_grid || *gen_cyl) {
      std::string tiling = slurp(tiling_path);
      InstanceHandle inst;
      int rc = *gen_grid ? skm_gen_grid(tiling.c_str(), eps.c_str(), &inst.ptr)
                         : skm_gen_cylinder(tiling.c_str(), eps.c_str(), &inst.ptr);
      if (rc != SKM_OK) return report_failure(rc);
      StringHandle text;
      if ((rc = skm_instance_serialize(inst.ptr, &text.ptr)) != SKM_OK) return report_failure(rc);
      if (!spill(out_path, text.str())) return kUsage;
      std::cout << "points " << skm_instance_num_points(inst.ptr) << "\ncentres "
                << skm_instance_num_centres(inst.ptr) << "\nk " << skm_instance_k(inst.ptr)
                << "\nwrote " << out_path << "\n";
      return kOk;
    }
    if (*gen_pvc4 || *gen_pvc6) {
      std::string graph = slurp(graph_path);
      InstanceHandle inst;
      int rc = *gen_pvc4 ? skm_gen_pvc4(graph.c_str(), k, &inst.ptr)
                         : skm_gen_pvc6(graph.c_str(), k, &inst.ptr);
      if (rc != SKM_OK) return report_failure(rc);
      StringHandle text;
      if ((rc = skm_instance_serialize(inst.ptr, &text.ptr)) != SKM_OK) return report_failure(rc);
      if (!spill(out_path, text.str())) return kUsage;
      std::cout << "points " << skm_instance_num_points(inst.ptr) << "\ncentres "
                << skm_instance_num_centres(inst.ptr) << "\nk " << skm_instance_k(inst.ptr)
                << "\nwrote " << out_path << "\n";
      return kOk;
    }
    if (*solve) {
      InstanceHandle inst;
      int rc = load_instance(instance_path, inst);
      if (rc != SKM_OK) return report_failure(rc);
      skm_search_options opts{};
      opts.rho = rho;
      opts.max_iters = max_iters;
      opts.force = force ? 1 : 0;
      opts.seed_centres = seed_centres.empty() ? nullptr : seed_centres.c_str();
      skm_solution* sol = nullptr;
      StringHandle trace;
      rc = skm_solve_local(inst.ptr, &opts, &sol, &trace.ptr);
      if (rc != SKM_OK) return report_failure(rc);
      StringHandle cost, centres;
      skm_solution_cost(sol, &cost.ptr);
      skm_solution_centres(sol, &centres.ptr);
      std::cout << "cost " << cost.str() << "\n";
      std::cout << "cost_approx " << skm_solution_cost_approx(sol) << "\n";
      std::cout << "centres " << centres.str() << "\n";
      skm_solution_free(sol);
      if (!out_path.empty()) {
        if (!spill(out_path, trace.str())) return kUsage;
        std::cout << "trace " << out_path << "\n";
      }
      return kOk;
    }
    if (*oracle) {
      InstanceHandle inst;
      int rc = load_instance(instance_path, inst);
      if (rc != SKM_OK) return report_failure(rc);
      skm_optima* opt = nullptr;
      rc = skm_oracle_solve(inst.ptr, budget, jobs, &opt);
      if (rc != SKM_OK) return report_failure(rc);
      StringHandle cost;
      skm_optima_cost(opt, &cost.ptr);
      std::cout << "optimal_cost " << cost.str() << "\n";
      std::cout << "optimal_cost_approx " << skm_optima_cost_approx(opt) << "\n";
      std::cout << "optima " << skm_optima_count(opt) << "\n";
      for (size_t i = 0; i < skm_optima_count(opt); ++i) {
        StringHandle s;
        skm_optima_solution(opt, i, &s.ptr);
        std::cout << "solution " << s.str() << "\n";
      }
      skm_optima_free(opt);
      return kOk;
    }
    if (*verify) {
      InstanceHandle inst;
      int rc = load_instance(instance_path, inst);
      if (rc != SKM_OK) return report_failure(rc);
      int flag = 0;
      StringHandle report;
      if (family) {
        rc = skm_certify_stable_family(inst.ptr, alpha.c_str(), budget, &flag, &report.ptr);
        if (rc != SKM_OK) return report_failure(rc);
      } else {
        rc = skm_falsify_stability(inst.ptr, alpha.c_str(), beta.c_str(), trials, seed, budget,
                                   jobs, &flag, &report.ptr);
        if (rc != SKM_OK) return report_failure(rc);
        flag = flag ? 0 : 1;  // violated -> verdict-negative
      }
      std::cout << report.str();
      if (!out_path.empty() && !spill(out_path, report.str())) return kUsage;
      return flag ? kOk : kVerdictNegative;
    }
    if (*certify) {
      InstanceHandle inst;
      int rc = load_instance(instance_path, inst);
      if (rc != SKM_OK) return report_failure(rc);
      int equivalent = 0;
      StringHandle report;
      rc = skm_certify_reduction(inst.ptr, variant.c_str(), budget, &equivalent, &report.ptr);
      if (rc != SKM_OK) return report_failure(rc);
      std::cout << report.str();
      if (!out_path.empty() && !spill(out_path, report.str())) return kUsage;
      return equivalent ? kOk : kVerdictNegative;
    }
    if (*lemmas) {
      bool all_ok = true;
      if (which == "all" || which == "spheres") {
        int ok = 0;
        StringHandle report;
        int rc = skm_check_sphere_lemmas(nmax, &ok, &report.ptr);
        if (rc != SKM_OK) return report_failure(rc);
        std::cout << report.str();
        all_ok = all_ok && ok;
      }
      if (which == "all" || which == "measure") {
        for (const char* r : {"1/4", "1/2", "1"}) {
          for (const char* e : {"1/20", "1/50", "1/100"}) {
            int ok = 0;
            StringHandle report;
            int rc = skm_check_measure_lemma(r, e, &ok, &report.ptr);
            if (rc != SKM_OK) return report_failure(rc);
            std::cout << report.str();
            all_ok = all_ok && ok;
          }
        }
      }
      return all_ok ? kOk : kVerdictNegative;
    }
    if (*bench) {
      InstanceHandle inst;
      int rc = load_instance(instance_path, inst);
      if (rc != SKM_OK) return report_failure(rc);
      using clock = std::chrono::steady_clock;
      auto t0 = clock::now();
      skm_optima* opt = nullptr;
      rc = skm_oracle_solve(inst.ptr, budget, jobs, &opt);
      if (rc != SKM_OK) return report_failure(rc);
      auto t1 = clock::now();
      skm_search_options opts{};
      opts.rho = rho;
      skm_solution* sol = nullptr;
      rc = skm_solve_local(inst.ptr, &opts, &sol, nullptr);
      if (rc != SKM_OK) {
        skm_optima_free(opt);
        return report_failure(rc);
      }
      auto t2 = clock::now();
      StringHandle ocost, scost, scent;
      skm_optima_cost(opt, &ocost.ptr);
      skm_solution_cost(sol, &scost.ptr);
      skm_solution_centres(sol, &scent.ptr);
      bool matched = false;
      for (size_t i = 0; i < skm_optima_count(opt) && !matched; ++i) {
        StringHandle s;
        skm_optima_solution(opt, i, &s.ptr);
        matched = s.str() == scent.str();
      }
      auto ms = [](auto a, auto b) {
        return std::chrono::duration_cast<std::chrono::microseconds>(b - a).count() / 1000.0;
      };
      std::cout << "oracle_ms " << ms(t0, t1) << "\n"
                << "search_ms " << ms(t1, t2) << "\n"
                << "oracle_cost " << ocost.str() << "\n"
                << "search_cost " << scost.str() << "\n"
                << "search_in_optima " << (matched ? "yes" : "no") << "\n";
      skm_optima_free(opt);
      skm_solution_free(sol);
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
