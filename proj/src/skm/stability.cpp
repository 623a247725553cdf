#include "stability.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <thread>

namespace skm {

namespace {

std::pair<int, int> skey(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::set<std::pair<int, int>> canonical_unscaled_pairs(const Instance& inst,
                                                       const std::vector<int>& S) {
  std::set<std::pair<int, int>> unscaled;
  for (const Point& p : inst.points) unscaled.insert(skey(p.id, nearest_centre(inst, p.id, S)));
  return unscaled;
}

}  // namespace

Rat Perturbation::factor(int a, int b) const {
  auto it = scale.find(skey(a, b));
  return it == scale.end() ? Rat(1) : it->second;
}

Rat Perturbation::penalty_factor(int point_id) const {
  if (!penalty_scale) return Rat(1);
  auto it = penalty_scale->find(point_id);
  return it == penalty_scale->end() ? Rat(1) : it->second;
}

Perturbation canonical_perturbation(const Instance& inst, const std::vector<int>& S,
                                    const Rat& eps_prime) {
  if (eps_prime < 0) fail(Errc::invalid_argument, "eps_prime must be nonnegative");
  Perturbation pert;
  pert.alpha = 1 + eps_prime;
  if (eps_prime == 0) {
    if (inst.has_penalties) pert.penalty_scale.emplace();
    return pert;
  }
  auto unscaled = canonical_unscaled_pairs(inst, S);
  for (const Point& p : inst.points)
    for (const Point& c : inst.centres) {
      if (p.id == c.id) continue;
      auto key = skey(p.id, c.id);
      if (!unscaled.count(key)) pert.scale[key] = pert.alpha;
    }
  if (inst.has_penalties) {
    pert.penalty_scale.emplace();
    Rat pen_alpha = inst.power() == 2 ? Rat(pert.alpha * pert.alpha) : pert.alpha;
    for (const Point& p : inst.points) {
      size_t j = inst.point_index(p.id);
      size_t si = inst.centre_index(nearest_centre(inst, p.id, S));
      if (inst.assign_cost(j, si) < inst.penalty_of(p.id))
        (*pert.penalty_scale)[p.id] = pen_alpha;
    }
  }
  return pert;
}

Instance apply_perturbation(const Instance& inst, const Perturbation& pert) {
  for (const auto& [key, f] : pert.scale)
    if (f < 1 || f > pert.alpha)
      fail(Errc::invalid_argument, "scale factor out of [1, alpha] on pair (" +
                                       std::to_string(key.first) + "," +
                                       std::to_string(key.second) + ")");
  Rat pen_cap = inst.power() == 2 ? Rat(pert.alpha * pert.alpha) : pert.alpha;
  if (pert.penalty_scale)
    for (const auto& [id, f] : *pert.penalty_scale)
      if (f < 1 || f > pen_cap)
        fail(Errc::invalid_argument,
             "penalty factor out of bounds on point " + std::to_string(id));

  Instance out;
  out.objective = inst.objective;
  out.k = inst.k;
  out.points = inst.points;
  out.centres = inst.centres;
  out.centre_order = inst.centre_order;
  out.provenance = inst.provenance;
  out.metric.kind = MetricKind::explicit_matrix;
  out.metric.skip_triangle = true;

  auto put = [&](int a, int b, const Scalar& d) {
    if (a == b) return;
    out.metric.entries[skey(a, b)] = d.scaled(pert.factor(a, b));
  };
  for (const Point& p : inst.points)
    for (const Point& c : inst.centres) put(p.id, c.id, distance(inst.metric, p, c));
  auto try_put = [&](const Point& a, const Point& b) {
    if (a.id == b.id || out.metric.entries.count(skey(a.id, b.id))) return;
    try {
      put(a.id, b.id, distance(inst.metric, a, b));
    } catch (const Error&) {
    }
  };
  for (size_t i = 0; i < inst.centres.size(); ++i)
    for (size_t j = i + 1; j < inst.centres.size(); ++j) try_put(inst.centres[i], inst.centres[j]);
  for (size_t i = 0; i < inst.points.size(); ++i)
    for (size_t j = i + 1; j < inst.points.size(); ++j) try_put(inst.points[i], inst.points[j]);

  out.has_penalties = inst.has_penalties;
  if (inst.has_penalties) {
    for (const auto& [id, p] : inst.penalties)
      out.penalties[id] = p.scaled(pert.penalty_factor(id));
  }
  out.finalize();
  return out;
}

namespace {

// value in the ordered group of radical sums extended with +infinity
struct ExtVal {
  bool inf = true;
  RadicalSum v;
  bool less(const ExtVal& o) const {
    if (inf) return false;
    if (o.inf) return true;
    return v < o.v;
  }
};

}  // namespace

RadicalSum dist_bij(const Instance& inst, const std::vector<int>& S1,
                    const std::vector<int>& S2) {
  if (S1.size() != S2.size())
    fail(Errc::invalid_argument, "dist_bij needs equal-size centre sets");
  size_t n = S1.size();
  if (n == 0) return RadicalSum();
  std::vector<std::vector<RadicalSum>> cost(n, std::vector<RadicalSum>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) cost[i][j] = RadicalSum::of(inst.dist_cc(S1[i], S2[j]));

  // Hungarian algorithm with potentials; exact arithmetic throughout.
  std::vector<RadicalSum> u(n + 1), v(n + 1);
  std::vector<size_t> match(n + 1, 0);  // match[j] = row assigned to column j (1-based)
  std::vector<size_t> way(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    match[0] = i;
    size_t j0 = 0;
    std::vector<ExtVal> minv(n + 1);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      size_t i0 = match[j0], j1 = 0;
      ExtVal delta;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        ExtVal cur{false, cost[i0 - 1][j - 1] - u[i0] - v[j]};
        if (cur.less(minv[j])) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j].less(delta)) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta.v;
          v[j] -= delta.v;
        } else if (!minv[j].inf) {
          minv[j].v -= delta.v;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  RadicalSum total;
  for (size_t j = 1; j <= n; ++j) total += cost[match[j] - 1][j - 1];
  return total;
}

namespace {

// per-anchor data of the canonical perturbation: which pairs stay unscaled
// and which penalties get scaled
struct CanonicalView {
  std::set<std::pair<int, int>> unscaled;
  std::map<int, bool> pen_scaled;
};

CanonicalView canonical_view(const Instance& inst, const std::vector<int>& S) {
  CanonicalView view;
  view.unscaled = canonical_unscaled_pairs(inst, S);
  if (inst.has_penalties) {
    for (const Point& p : inst.points) {
      size_t j = inst.point_index(p.id);
      size_t si = inst.centre_index(nearest_centre(inst, p.id, S));
      view.pen_scaled[p.id] = inst.assign_cost(j, si) < inst.penalty_of(p.id);
    }
  }
  return view;
}

RadicalSum perturbed_cost_view(const Instance& inst, const CanonicalView& view,
                               const RadicalSum& alpha, const std::vector<int>& T) {
  std::vector<size_t> t_idx;
  t_idx.reserve(T.size());
  for (int cid : T) t_idx.push_back(inst.centre_index(cid));
  if (T.empty()) fail(Errc::invalid_argument, "empty solution");

  Rat alpha_rat;
  if (alpha.is_rational(&alpha_rat)) {
    // rational scaling keeps every candidate value a Scalar
    Rat apow = inst.power() == 2 ? Rat(alpha_rat * alpha_rat) : alpha_rat;
    RadicalSum::Builder acc;
    for (const Point& p : inst.points) {
      size_t j = inst.point_index(p.id);
      Scalar best;
      bool have = false;
      for (size_t t = 0; t < T.size(); ++t) {
        Scalar val = inst.assign_cost(j, t_idx[t]);
        if (!view.unscaled.count(skey(p.id, T[t]))) val = val.scaled(apow);
        if (!have || val < best) {
          best = val;
          have = true;
        }
      }
      if (inst.has_penalties) {
        Scalar pval = inst.penalty_of(p.id);
        if (view.pen_scaled.at(p.id)) pval = pval.scaled(apow);
        if (pval < best) best = pval;
      }
      acc.add(Rat(1), best, rat_of_u64(p.multiplicity));
    }
    return acc.take();
  }

  RadicalSum alpha_pow = inst.power() == 2 ? alpha * alpha : alpha;
  RadicalSum total;
  for (const Point& p : inst.points) {
    size_t j = inst.point_index(p.id);
    bool have = false;
    RadicalSum best;
    for (size_t t = 0; t < T.size(); ++t) {
      RadicalSum val = RadicalSum::of(inst.assign_cost(j, t_idx[t]));
      if (!view.unscaled.count(skey(p.id, T[t]))) val = alpha_pow * val;
      if (!have || val < best) {
        best = val;
        have = true;
      }
    }
    if (inst.has_penalties) {
      RadicalSum pval = RadicalSum::of(inst.penalty_of(p.id));
      if (view.pen_scaled.at(p.id)) pval = alpha_pow * pval;
      if (!have || pval < best) {
        best = pval;
        have = true;
      }
    }
    total += best.scaled(rat_of_u64(p.multiplicity));
  }
  return total;
}

}  // namespace

RadicalSum perturbed_cost(const Instance& inst, const std::vector<int>& S,
                          const RadicalSum& alpha, const std::vector<int>& T) {
  return perturbed_cost_view(inst, canonical_view(inst, S), alpha, T);
}

FamilyCertificate certify_stable_family(const Instance& inst, const RadicalSum& alpha,
                                        unsigned long long oracle_budget) {
  if (alpha.compare(RadicalSum(Rat(1))) < 0)
    fail(Errc::invalid_argument, "alpha must be >= 1");
  OptimaSet optima = solve_exact(inst, oracle_budget);
  auto feas = enumerate_feasible(inst, oracle_budget);
  FamilyCertificate cert;
  for (const auto& S : feas) {
    CanonicalView view = canonical_view(inst, S);
    bool have = false;
    RadicalSum best;
    std::vector<size_t> argmin;
    for (size_t t = 0; t < feas.size(); ++t) {
      RadicalSum c = perturbed_cost_view(inst, view, alpha, feas[t]);
      if (!have) {
        best = c;
        argmin = {t};
        have = true;
        continue;
      }
      int cmp = c.compare(best);
      if (cmp < 0) {
        best = c;
        argmin = {t};
      } else if (cmp == 0) {
        argmin.push_back(t);
      }
    }
    ++cert.perturbations_checked;
    for (size_t t : argmin) {
      if (!optima.contains(feas[t])) {
        cert.stable_on_family = false;
        cert.witness_reference = S;
        cert.witness_optimum = feas[t];
        return cert;
      }
    }
  }
  return cert;
}

FamilyCertificate certify_stable_family(const Instance& inst, const Rat& alpha,
                                        unsigned long long oracle_budget) {
  return certify_stable_family(inst, RadicalSum(alpha), oracle_budget);
}

namespace {

Rat random_unit_rational(std::mt19937_64& rng) {
  unsigned long long r = rng() >> 11;  // 53 bits
  Rat q(Int(static_cast<unsigned long>(r)), Int(1) << 53);
  q.canonicalize();
  return q;
}

Perturbation random_perturbation(const Instance& inst, const Rat& alpha,
                                 unsigned long long seed, unsigned long long trial_index) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + trial_index + 1);
  Perturbation pert;
  pert.alpha = alpha;
  Rat spread = alpha - 1;
  std::set<std::pair<int, int>> seen;
  for (const Point& p : inst.points)
    for (const Point& c : inst.centres) {
      if (p.id == c.id) continue;
      auto key = skey(p.id, c.id);
      if (!seen.insert(key).second) continue;
      switch (rng() % 3) {
        case 0: break;  // factor 1
        case 1: pert.scale[key] = alpha; break;
        case 2: {
          Rat f = 1 + spread * random_unit_rational(rng);
          if (f != 1) pert.scale[key] = f;
          break;
        }
      }
    }
  if (inst.has_penalties) {
    pert.penalty_scale.emplace();
    Rat pen_alpha = inst.power() == 2 ? Rat(alpha * alpha) : alpha;
    Rat pen_spread = pen_alpha - 1;
    for (const Point& p : inst.points) {
      switch (rng() % 3) {
        case 0: break;
        case 1: (*pert.penalty_scale)[p.id] = pen_alpha; break;
        case 2: {
          Rat f = 1 + pen_spread * random_unit_rational(rng);
          if (f != 1) (*pert.penalty_scale)[p.id] = f;
          break;
        }
      }
    }
  }
  return pert;
}

struct TrialOutcome {
  bool have = false;
  RadicalSum dist;
  unsigned long long index = 0;
  Perturbation pert;
  std::vector<int> perturbed_opt, original_opt;
};

void consider(TrialOutcome& best, TrialOutcome&& cand) {
  if (!cand.have) return;
  if (!best.have) {
    best = std::move(cand);
    return;
  }
  int cmp = cand.dist.compare(best.dist);
  if (cmp > 0 || (cmp == 0 && cand.index < best.index)) best = std::move(cand);
}

}  // namespace

StabilityVerdict falsify_stability(const Instance& inst, const Rat& alpha, const Rat& beta,
                                   unsigned long long random_trials, unsigned long long seed,
                                   unsigned long long oracle_budget, int jobs) {
  if (alpha < 1) fail(Errc::invalid_argument, "alpha must be >= 1");
  StabilityVerdict verdict;
  verdict.alpha = alpha;
  verdict.beta = beta;
  OptimaSet optima = solve_exact(inst, oracle_budget);

  std::vector<Perturbation> canonical;
  try {
    for (const auto& S : enumerate_feasible(inst, oracle_budget))
      canonical.push_back(canonical_perturbation(inst, S, Rat(alpha - 1)));
  } catch (const Error& e) {
    if (e.code() != Errc::budget_exceeded) throw;
    // canonical sweep skipped; random trials still run
  }

  unsigned long long total = canonical.size() + random_trials;
  auto run_trial = [&](unsigned long long idx) -> TrialOutcome {
    Perturbation pert =
        idx < canonical.size()
            ? canonical[idx]
            : random_perturbation(inst, alpha, seed, idx - canonical.size());
    Instance perturbed = apply_perturbation(inst, pert);
    OptimaSet popt = solve_exact(perturbed, oracle_budget);
    TrialOutcome out;
    for (const auto& O : optima.solutions) {
      for (const auto& Op : popt.solutions) {
        RadicalSum d = dist_bij(inst, O, Op);
        if (!out.have || out.dist < d) {
          out = {true, d, idx, pert, Op, O};
        }
      }
    }
    return out;
  };

  TrialOutcome best;
  size_t n_jobs = std::max(1, jobs);
  if (n_jobs <= 1 || total <= 1) {
    for (unsigned long long i = 0; i < total; ++i) consider(best, run_trial(i));
  } else {
    std::vector<TrialOutcome> worker_best(n_jobs);
    std::vector<std::thread> threads;
    for (size_t w = 0; w < n_jobs; ++w) {
      threads.emplace_back([&, w] {
        for (unsigned long long i = w; i < total; i += n_jobs)
          consider(worker_best[w], run_trial(i));
      });
    }
    for (auto& t : threads) t.join();
    for (auto& wb : worker_best) consider(best, std::move(wb));
  }

  verdict.trials_run = total;
  if (best.have) {
    verdict.max_dist = best.dist;
    if (best.dist.compare(RadicalSum(beta)) > 0) {
      verdict.violated = true;
      verdict.witness_pert = best.pert;
      verdict.witness_perturbed_optimum = best.perturbed_opt;
      verdict.witness_original_optimum = best.original_opt;
    }
  }
  return verdict;
}

}  // namespace skm
