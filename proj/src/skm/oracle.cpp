#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <thread>

#include "local_search.hpp"

namespace skm {

namespace {

bool colex_less(const std::vector<int>& a, const std::vector<int>& b) {
  // both sorted ascending, equal length here; compare from the back
  size_t i = a.size(), j = b.size();
  while (i > 0 && j > 0) {
    --i;
    --j;
    if (a[i] != b[j]) return a[i] < b[j];
  }
  return a.size() < b.size();
}

}  // namespace

unsigned long long binomial_capped(unsigned long long n, unsigned long long r,
                                   unsigned long long cap) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned long long v = 1;
  for (unsigned long long i = 1; i <= r; ++i) {
    v = v * (n - r + i) / i;
    if (v > cap) return cap + 1;
  }
  return v;
}

std::vector<std::vector<int>> enumerate_feasible(const Instance& inst,
                                                 unsigned long long budget,
                                                 const std::vector<int>& pins) {
  std::set<int> pin_set(pins.begin(), pins.end());
  for (int id : pin_set) inst.centre_index(id);
  std::vector<int> free_ids;
  for (const Point& c : inst.centres)
    if (!pin_set.count(c.id)) free_ids.push_back(c.id);
  std::sort(free_ids.begin(), free_ids.end());
  if (static_cast<int>(pin_set.size()) > inst.k)
    fail(Errc::invalid_argument, "more pinned centres than k");
  size_t choose = inst.k - pin_set.size();
  unsigned long long count = binomial_capped(free_ids.size(), choose, budget);
  if (count > budget)
    fail(Errc::budget_exceeded, "enumeration needs C(" + std::to_string(free_ids.size()) + "," +
                                    std::to_string(choose) + ") > budget " +
                                    std::to_string(budget) + " subset evaluations");
  std::vector<std::vector<int>> out;
  out.reserve(count);
  for_each_combination(free_ids.size(), choose, [&](const std::vector<size_t>& idx) {
    std::vector<int> s(pin_set.begin(), pin_set.end());
    for (size_t i : idx) s.push_back(free_ids[i]);
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
    return true;
  });
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

OptimaSet solve_exact(const Instance& inst, unsigned long long budget, int jobs,
                      const std::vector<int>& pins) {
  auto feas = enumerate_feasible(inst, budget, pins);

  struct Part {
    RadicalSum best;
    std::vector<size_t> argmin;
    bool any = false;
  };
  size_t n_jobs = std::max(1, jobs);
  n_jobs = std::min(n_jobs, feas.size() ? feas.size() : size_t(1));
  std::vector<Part> parts(n_jobs);
  auto run = [&](size_t w) {
    size_t lo = feas.size() * w / n_jobs;
    size_t hi = feas.size() * (w + 1) / n_jobs;
    Part& part = parts[w];
    for (size_t i = lo; i < hi; ++i) {
      RadicalSum c = cost_of(inst, feas[i]);
      if (!part.any) {
        part.best = c;
        part.argmin = {i};
        part.any = true;
        continue;
      }
      int cmp = c.compare(part.best);
      if (cmp < 0) {
        part.best = c;
        part.argmin = {i};
      } else if (cmp == 0) {
        part.argmin.push_back(i);
      }
    }
  };
  if (n_jobs == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (size_t w = 0; w < n_jobs; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  OptimaSet opt;
  bool any = false;
  std::vector<size_t> winners;
  for (const Part& part : parts) {
    if (!part.any) continue;
    if (!any) {
      opt.optimal_cost = part.best;
      winners = part.argmin;
      any = true;
      continue;
    }
    int cmp = part.best.compare(opt.optimal_cost);
    if (cmp < 0) {
      opt.optimal_cost = part.best;
      winners = part.argmin;
    } else if (cmp == 0) {
      winners.insert(winners.end(), part.argmin.begin(), part.argmin.end());
    }
  }
  if (!any) fail(Errc::invalid_argument, "no feasible solution");
  std::sort(winners.begin(), winners.end());
  for (size_t i : winners) opt.solutions.push_back(feas[i]);
  opt.enumeration_complete = true;
  return opt;
}

OptimaSet solve_exact(const AugmentedInstance& aug, unsigned long long budget, int jobs) {
  return solve_exact(aug.lifted, budget, jobs, {aug.dummy_id});
}

bool OptimaSet::contains(const std::vector<int>& s) const {
  std::vector<int> key = s;
  std::sort(key.begin(), key.end());
  return std::any_of(solutions.begin(), solutions.end(),
                     [&](const std::vector<int>& o) { return o == key; });
}

CostDropReport verify_cost_drop_theorem(const Instance& inst, const Rat& eps,
                                        unsigned long long budget) {
  auto feas = enumerate_feasible(inst, budget);
  CostDropReport rep;
  rep.feasible_solutions = feas.size();
  if (feas.size() * feas.size() > budget)
    fail(Errc::budget_exceeded, "pair enumeration exceeds budget");
  std::vector<RadicalSum> costs;
  costs.reserve(feas.size());
  for (const auto& s : feas) costs.push_back(cost_of(inst, s));
  bool pen = inst.has_penalties;

  for (size_t a = 0; a < feas.size(); ++a) {
    for (size_t b = 0; b < feas.size(); ++b) {
      if (a == b) continue;
      const auto& S = feas[a];
      const auto& O = feas[b];
      RadicalSum slack = psi(inst, S, O, pen).scaled(eps);
      if (!(costs[b] + slack < costs[a])) continue;  // premise fails
      ++rep.premise_pairs;
      std::vector<int> diff;
      std::set_difference(S.begin(), S.end(), O.begin(), O.end(), std::back_inserter(diff));
      int max_rho = static_cast<int>(diff.size());
      int found_at = -1;
      for (int t = 1; t <= max_rho && found_at < 0; ++t) {
        if (cost_drop_witness(inst, S, O, eps, t)) found_at = t;
      }
      if (found_at < 0) {
        rep.counterexamples.emplace_back(S, O);
      } else {
        ++rep.verified_pairs;
        rep.min_rho_histogram[found_at]++;
        rep.max_min_rho = std::max(rep.max_min_rho, found_at);
      }
    }
  }
  return rep;
}

NearlyGoodCertReport certify_nearly_good_implies_optimal(const Instance& inst, const Rat& eps,
                                                         unsigned long long budget) {
  OptimaSet opt = solve_exact(inst, budget);
  auto feas = enumerate_feasible(inst, budget);
  NearlyGoodCertReport rep;
  rep.feasible_solutions = feas.size();
  for (const auto& S : feas) {
    auto ng = is_nearly_good(inst, S, opt.solutions, eps);
    if (!ng.nearly_good) continue;
    ++rep.nearly_good_count;
    if (!opt.contains(S)) rep.violations.push_back(S);
  }
  return rep;
}

}  // namespace skm
