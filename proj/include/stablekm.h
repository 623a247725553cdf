/* stablekm: exact local search, brute-force oracles, stability falsification
 * and hardness-reduction generators for k-means/k-median with penalties.
 *
 * All functions return an skm_status code; on failure skm_last_error() holds
 * a message for the calling thread. Objects are opaque handles released with
 * their _free function; strings returned through char** are released with
 * skm_string_free. Rational arguments are strings like "11/10", "3", "1.25".
 */
#ifndef STABLEKM_H
#define STABLEKM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SKM_API __declspec(dllexport)
#else
#define SKM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct skm_instance skm_instance;
typedef struct skm_solution skm_solution;
typedef struct skm_optima skm_optima;

enum skm_status {
  SKM_OK = 0,
  SKM_ERR_PARSE = 1,
  SKM_ERR_INVALID = 2,
  SKM_ERR_BUDGET = 3,
  SKM_ERR_MISSING_ENTRY = 4,
  SKM_ERR_NUMERIC = 5,
  SKM_ERR_INTERNAL = 6
};

SKM_API const char* skm_version(void);
SKM_API const char* skm_last_error(void);
SKM_API void skm_string_free(char* s);

/* ---- instances ---- */
SKM_API int skm_instance_parse(const char* text, skm_instance** out);
SKM_API int skm_instance_serialize(const skm_instance* inst, char** out_text);
SKM_API void skm_instance_free(skm_instance* inst);
SKM_API int skm_instance_k(const skm_instance* inst);
SKM_API int skm_instance_num_points(const skm_instance* inst);
SKM_API int skm_instance_num_centres(const skm_instance* inst);
SKM_API int skm_instance_has_penalties(const skm_instance* inst);
/* dummy-centre reduction: penalties fold into an extra pinned centre z* */
SKM_API int skm_instance_lift(const skm_instance* inst, skm_instance** lifted, int* dummy_id);

/* ---- generators (inputs are file contents, formats in docs/format.md) ---- */
SKM_API int skm_gen_grid(const char* grid_tiling_text, const char* eps, skm_instance** out);
SKM_API int skm_gen_cylinder(const char* grid_tiling_text, const char* eps, skm_instance** out);
/* k_override <= 0 keeps the k from the graph header */
SKM_API int skm_gen_pvc4(const char* graph_text, int k_override, skm_instance** out);
SKM_API int skm_gen_pvc6(const char* graph_text, int k_override, skm_instance** out);

/* ---- rho-swap local search ---- */
typedef struct skm_search_options {
  int rho;                  /* >= 1; default 2 when zero */
  uint64_t max_iters;       /* 0 = unbounded */
  uint64_t neighbor_budget; /* 0 = default 10^8 */
  int force;                /* override the neighbourhood budget refusal */
  const char* seed_centres; /* "id id ..." or NULL for the default seed */
} skm_search_options;

/* Penalty instances are searched through the lifted instance with the dummy
 * centre pinned; the returned solution is reported in base-instance terms. */
SKM_API int skm_solve_local(const skm_instance* inst, const skm_search_options* opts,
                            skm_solution** out, char** trace_text);
SKM_API void skm_solution_free(skm_solution* sol);
SKM_API int skm_solution_cost(const skm_solution* sol, char** out);
SKM_API double skm_solution_cost_approx(const skm_solution* sol);
SKM_API int skm_solution_centres(const skm_solution* sol, char** out);

/* ---- exhaustive oracle ---- */
SKM_API int skm_oracle_solve(const skm_instance* inst, uint64_t budget, int jobs,
                             skm_optima** out);
SKM_API void skm_optima_free(skm_optima* opt);
SKM_API int skm_optima_cost(const skm_optima* opt, char** out);
SKM_API double skm_optima_cost_approx(const skm_optima* opt);
SKM_API size_t skm_optima_count(const skm_optima* opt);
SKM_API int skm_optima_solution(const skm_optima* opt, size_t index, char** out);

/* ---- stability ---- */
/* violated=1 when some perturbation within [1,alpha] moves an optimum further
 * than beta (dist_bij, original metric) from some original optimum. */
SKM_API int skm_falsify_stability(const skm_instance* inst, const char* alpha, const char* beta,
                                  uint64_t random_trials, uint64_t seed, uint64_t oracle_budget,
                                  int jobs, int* violated, char** report);
/* alpha-stability over the canonical perturbation family (beta = 0). */
SKM_API int skm_certify_stable_family(const skm_instance* inst, const char* alpha,
                                      uint64_t oracle_budget, int* certified, char** report);

/* ---- reduction certificates and lemma checks ---- */
/* variant: "grid", "cylinder", "pvc4", "pvc6"; the instance must carry the
 * generator's provenance block. equivalent=1 when the source instance and the
 * clustering instance agree across the full threshold sweep. */
SKM_API int skm_certify_reduction(const skm_instance* inst, const char* variant,
                                  uint64_t budget, int* equivalent, char** report);
/* exhaustive check that every ordered premise pair (S, O) has a cost-drop
 * witness within |S \ O| swaps at the given rational eps */
SKM_API int skm_verify_cost_drop(const skm_instance* inst, const char* eps, uint64_t budget,
                                 int* ok, char** report);
/* exhaustive check that every nearly-good solution (at the given eps, against
 * the full optima set) is itself optimal */
SKM_API int skm_certify_nearly_good(const skm_instance* inst, const char* eps, uint64_t budget,
                                    int* ok, char** report);
/* sphere-fit residuals, quarter-integrality gaps and curve clearance for all
 * 1 <= i < j <= n_max, in 3 and 4 dimensions */
SKM_API int skm_check_sphere_lemmas(int n_max, int* ok, char** report);
/* lattice-measure sandwich at radius r and spacing eps */
SKM_API int skm_check_measure_lemma(const char* r, const char* eps, int* ok, char** report);

#ifdef __cplusplus
}
#endif
#endif /* STABLEKM_H */
