#pragma once

#include <random>

#include "skm/instance.hpp"
#include "skm/reductions.hpp"

namespace skm::testing {

// 1-D kmedian instance X = C = {0, 1, 4, 5}, k = 2; optimum cost 2 with
// exactly four optima {0,4}, {0,5}, {1,4}, {1,5}.
Instance line_instance(Objective obj = Objective::kmedian);

// X = {0, 10}, C = {0}, k = 1, p(0) = 5, p(10) = 3 (kmedian): cost({0}) = 3.
Instance small_penalty_instance();

// X = {0, 1} = C, k = 1: two cost-tied optima one unit apart.
Instance two_optima_instance();

// random euclidean instance with rational coordinates; penalties optional
Instance random_instance(std::mt19937_64& rng, int n_points, int n_centres, int k, int dim,
                         Objective obj, bool penalties);

// well-separated clusters with a unique optimum by construction; used by the
// acceptance suite as certified-stable fixtures
Instance clustered_instance(std::mt19937_64& rng, int n_clusters, Objective obj, bool penalties,
                            int extra_centres_per_cluster, int points_per_cluster);

GridTilingInstance full_grid_tiling(int n, int k);
// cell sets whose candidates differ in the first coordinate only, so every
// pair of optima stays within dist_bij k^2 eps (n-1)
GridTilingInstance row_offset_grid_tiling(int n, int k);
// the forced non-monotone 2x2 singleton family (unsolvable)
GridTilingInstance unsolvable_grid_tiling();

PvcGraph path_graph(int n, int k, int s);      // P_n
PvcGraph triangle_graph(int k, int s);
PvcGraph star_graph(int leaves, int k, int s); // K_{1,leaves}
PvcGraph cycle_graph(int n, int k, int s);     // C_n
PvcGraph random_graph(std::mt19937_64& rng, int n, double edge_prob, int k);

// brute-force bijection distance, factorial enumeration (test oracle)
RadicalSum dist_bij_brute(const Instance& inst, const std::vector<int>& s1,
                          const std::vector<int>& s2);

}  // namespace skm::testing
