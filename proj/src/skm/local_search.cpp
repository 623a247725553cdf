#include "local_search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace skm {

void for_each_combination(size_t n, size_t t,
                          const std::function<bool(const std::vector<size_t>&)>& fn) {
  if (t > n) return;
  std::vector<size_t> idx(t);
  for (size_t i = 0; i < t; ++i) idx[i] = i;
  while (true) {
    if (!fn(idx)) return;
    // advance
    size_t i = t;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - t) {
        ++idx[i];
        for (size_t j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
    if (t == 0) return;
  }
}

unsigned long long neighborhood_size(int k, int num_centres, int rho, int pinned) {
  auto choose = [](long long n, long long r) -> unsigned long long {
    if (r < 0 || r > n) return 0;
    unsigned long long v = 1;
    for (long long i = 1; i <= r; ++i) {
      v = v * static_cast<unsigned long long>(n - r + i) / static_cast<unsigned long long>(i);
      if (v > (1ULL << 62)) return 1ULL << 62;
    }
    return v;
  };
  unsigned long long total = 0;
  for (int t = 1; t <= rho; ++t) {
    unsigned long long c = choose(k - pinned, t) * choose(num_centres - k, t);
    total += c;
    if (total > (1ULL << 62)) return 1ULL << 62;
  }
  return total;
}

namespace {

double convergence_bound(const Instance& inst) {
  double delta = rat_to_double(inst.max_sqdist());
  double n = static_cast<double>(inst.total_weight());
  double prod = n * delta;
  if (!(prod > 1.0)) return 0;
  return 2.0 * inst.k * std::log(prod);
}

struct BestMove {
  bool found = false;
  RadicalSum cost;
  std::vector<int> in, out;  // sorted ids
  std::vector<int> solution;
};

// enumerate all neighbours of S at exactly t in/out swaps, keep cheapest with
// lexicographic (in, out) tie-break
void scan_swaps(const Instance& inst, const std::vector<int>& S,
                const std::vector<int>& movable, const std::vector<int>& outside, int t,
                BestMove& best) {
  for_each_combination(movable.size(), t, [&](const std::vector<size_t>& out_idx) {
    std::vector<int> out_ids;
    out_ids.reserve(t);
    for (size_t i : out_idx) out_ids.push_back(movable[i]);
    std::set<int> removed(out_ids.begin(), out_ids.end());
    std::vector<int> kept;
    kept.reserve(S.size());
    for (int c : S)
      if (!removed.count(c)) kept.push_back(c);
    for_each_combination(outside.size(), t, [&](const std::vector<size_t>& in_idx) {
      std::vector<int> in_ids;
      in_ids.reserve(t);
      for (size_t i : in_idx) in_ids.push_back(outside[i]);
      std::vector<int> cand = kept;
      cand.insert(cand.end(), in_ids.begin(), in_ids.end());
      std::sort(cand.begin(), cand.end());
      RadicalSum c = cost_of(inst, cand);
      if (!best.found) {
        best = {true, c, in_ids, out_ids, cand};
        return true;
      }
      int cmp = c.compare(best.cost);
      if (cmp < 0 || (cmp == 0 && std::pair(in_ids, out_ids) < std::pair(best.in, best.out))) {
        best = {true, c, in_ids, out_ids, cand};
      }
      return true;
    });
    return true;
  });
}

}  // namespace

std::pair<Solution, SearchTrace> rho_swap_search(const Instance& inst, const SearchConfig& cfg) {
  if (cfg.rho < 1) fail(Errc::invalid_argument, "rho must be >= 1");
  std::set<int> pin_set(cfg.pin_centres.begin(), cfg.pin_centres.end());
  if (static_cast<int>(pin_set.size()) >= inst.k)
    fail(Errc::invalid_argument, "infeasible pin set: needs |pins| < k");
  for (int id : pin_set) inst.centre_index(id);  // validates ids

  // seed: pins plus the first centres of centre_order
  std::vector<int> S;
  if (cfg.seed_solution) {
    S = *cfg.seed_solution;
    std::sort(S.begin(), S.end());
    if (static_cast<int>(S.size()) != inst.k)
      fail(Errc::invalid_argument, "seed solution has wrong size");
    std::set<int> sset(S.begin(), S.end());
    if (sset.size() != S.size()) fail(Errc::invalid_argument, "seed repeats a centre");
    for (int id : pin_set)
      if (!sset.count(id)) fail(Errc::invalid_argument, "seed does not contain pinned centre");
    for (int id : S) inst.centre_index(id);
  } else {
    S.assign(pin_set.begin(), pin_set.end());
    for (int id : inst.centre_order) {
      if (static_cast<int>(S.size()) == inst.k) break;
      if (!pin_set.count(id)) S.push_back(id);
    }
    std::sort(S.begin(), S.end());
  }
  if (static_cast<int>(S.size()) != inst.k) fail(Errc::invalid_argument, "no feasible seed");

  int rho = std::min<int>(cfg.rho, inst.k - static_cast<int>(pin_set.size()));
  rho = std::max(rho, 0);
  unsigned long long nbhd =
      neighborhood_size(inst.k, static_cast<int>(inst.centres.size()), rho,
                        static_cast<int>(pin_set.size()));
  if (nbhd > cfg.neighbor_budget && !cfg.force)
    fail(Errc::budget_exceeded,
         "neighborhood has " + std::to_string(nbhd) + " candidates, budget " +
             std::to_string(cfg.neighbor_budget) + " (use force to override)");

  SearchTrace trace;
  trace.log_bound = convergence_bound(inst);
  trace.bound_floor = static_cast<unsigned long long>(std::floor(std::max(0.0, trace.log_bound)));

  RadicalSum cur_cost = cost_of(inst, S);
  trace.steps.push_back({0, {}, {}, S, cur_cost});

  unsigned long long iter = 0;
  while (true) {
    if (cfg.max_iters && iter >= *cfg.max_iters) {
      trace.terminated_reason = StopReason::max_iters;
      break;
    }
    std::vector<int> movable, outside;
    std::set<int> sset(S.begin(), S.end());
    for (int c : S)
      if (!pin_set.count(c)) movable.push_back(c);
    for (const Point& c : inst.centres)
      if (!sset.count(c.id)) outside.push_back(c.id);
    std::sort(movable.begin(), movable.end());
    std::sort(outside.begin(), outside.end());

    BestMove best;
    for (int t = 1; t <= rho; ++t) scan_swaps(inst, S, movable, outside, t, best);
    if (!best.found || !(best.cost < cur_cost)) {
      trace.terminated_reason = StopReason::local_opt;
      break;
    }
    ++iter;
    S = best.solution;
    cur_cost = best.cost;
    trace.steps.push_back({iter, best.in, best.out, S, cur_cost});
  }
  return {solution_cost(inst, S), trace};
}

std::pair<Solution, SearchTrace> rho_swap_search(const AugmentedInstance& aug, SearchConfig cfg) {
  cfg.pin_centres.push_back(aug.dummy_id);
  if (cfg.seed_solution &&
      std::find(cfg.seed_solution->begin(), cfg.seed_solution->end(), aug.dummy_id) ==
          cfg.seed_solution->end())
    cfg.seed_solution->push_back(aug.dummy_id);
  return rho_swap_search(aug.lifted, cfg);
}

NearlyGoodResult is_nearly_good(const Instance& inst, const std::vector<int>& S,
                                const std::vector<std::vector<int>>& optima, const Rat& eps) {
  if (optima.empty()) fail(Errc::invalid_argument, "is_nearly_good needs a nonempty optima set");
  RadicalSum cs = cost_of(inst, S);
  for (const auto& F : optima) {
    RadicalSum rhs = cost_of(inst, F);
    rhs += psi(inst, S, F, inst.has_penalties).scaled(Rat(2 * eps));
    if (!(cs <= rhs)) return {false, F};
  }
  return {true, std::nullopt};
}

std::optional<std::vector<int>> cost_drop_witness(const Instance& inst, const std::vector<int>& S,
                                                  const std::vector<int>& O, const Rat& eps,
                                                  int rho) {
  RadicalSum cs = cost_of(inst, S);
  RadicalSum co = cost_of(inst, O);
  RadicalSum slack = psi(inst, S, O, inst.has_penalties).scaled(eps);
  if (!(co + slack < cs)) return std::nullopt;  // premise fails
  RadicalSum target = cs + (co + slack - cs).scaled(Rat(1, inst.k));

  std::vector<int> outside;
  std::set<int> sset(S.begin(), S.end());
  for (const Point& c : inst.centres)
    if (!sset.count(c.id)) outside.push_back(c.id);
  std::sort(outside.begin(), outside.end());
  std::vector<int> movable(S);
  std::sort(movable.begin(), movable.end());

  std::optional<std::vector<int>> witness;
  for (int t = 1; t <= rho && !witness; ++t) {
    for_each_combination(movable.size(), t, [&](const std::vector<size_t>& out_idx) {
      std::set<int> removed;
      for (size_t i : out_idx) removed.insert(movable[i]);
      bool keep_going = true;
      for_each_combination(outside.size(), t, [&](const std::vector<size_t>& in_idx) {
        std::vector<int> cand;
        for (int c : S)
          if (!removed.count(c)) cand.push_back(c);
        for (size_t i : in_idx) cand.push_back(outside[i]);
        std::sort(cand.begin(), cand.end());
        if (cost_of(inst, cand) <= target) {
          witness = cand;
          keep_going = false;
          return false;
        }
        return true;
      });
      return keep_going;
    });
  }
  return witness;
}

}  // namespace skm
