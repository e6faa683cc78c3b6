#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "twtsim/sim.hpp"
#include "twtsim/util.hpp"

namespace twtsim {

enum class GroupingRoutine { greedy, rr, fixed };

inline const char* to_string(GroupingRoutine g) {
  switch (g) {
    case GroupingRoutine::greedy: return "greedy";
    case GroupingRoutine::rr: return "rr";
    case GroupingRoutine::fixed: return "fixed";
  }
  return "?";
}

inline GroupingRoutine parse_grouping_routine(const std::string& s) {
  if (s == "greedy") return GroupingRoutine::greedy;
  if (s == "rr") return GroupingRoutine::rr;
  if (s == "fixed") return GroupingRoutine::fixed;
  throw ConfigError("unknown grouping routine '" + s + "' (expected greedy|rr|fixed)");
}

/// How group valuations are estimated: finite-horizon simulations averaged
/// over a fixed seed list, all candidates sharing the same seeds.
struct EvalSpec {
  Block horizon = 20000;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  RaRoutine ra = RaRoutine::dpp;
};

struct GroupValuation {
  double value = 0;  // weighted timely throughput, packets per block
};

/// f_l(G): mean over eval seeds of sum_{m in G} alpha_m * transmitted_m / T,
/// simulating the member set alone under the group's triplet. f_l(empty) = 0.
inline GroupValuation evaluate_group(const GlobalConfig& cfg,
                                     const std::vector<StaProfile>& all_stas,
                                     const std::vector<int>& members,
                                     const TwtTriplet& triplet, RaRoutine ra,
                                     const EvalSpec& spec) {
  GroupValuation gv;
  if (members.empty()) return gv;

  std::vector<StaProfile> subset;
  subset.reserve(members.size());
  for (const auto& s : all_stas) {
    for (int id : members) {
      if (s.id == id) subset.push_back(s);
    }
  }
  if (subset.size() != members.size())
    throw ConfigError("group member id not present in station list");

  GroupAssignment ga;
  ga.groups = {members};
  ga.triplets = {triplet};

  double acc = 0;
  for (std::uint64_t seed : spec.seeds) {
    const auto em = run_episode(cfg, subset, ga, ra, spec.horizon, seed);
    acc += em.system_timely_throughput;
  }
  gv.value = acc / static_cast<double>(spec.seeds.size());
  return gv;
}

/// Valuation callback for the greedy partitioner: value of `members` under
/// group slot l. Injectable so synthetic valuations can drive oracle tests.
using ValuationFn =
    std::function<double(std::size_t l, const std::vector<int>& members)>;

/// Marginal gain of adding `sta` to group l's current set.
inline double marginal_gain(const ValuationFn& f, std::size_t l,
                            const std::vector<int>& current, double current_value,
                            int sta) {
  std::vector<int> next = current;
  next.push_back(sta);
  std::sort(next.begin(), next.end());
  return f(l, next) - current_value;
}

/// Greedy partitioner: repeatedly assigns the (station, group) pair with the
/// largest marginal gain until every station is placed. Ties break toward
/// the smallest group index, then the smallest station id. Candidate
/// evaluations within a round are independent and may run on several
/// threads; the pick is merged in deterministic (l, m) order.
inline GroupAssignment greedy_grouping_core(const std::vector<int>& sta_ids,
                                            const std::vector<TwtTriplet>& triplets,
                                            const ValuationFn& f, unsigned jobs = 1) {
  const std::size_t L = triplets.size();
  if (L == 0) throw ConfigError("greedy grouping needs at least one group");
  GroupAssignment ga;
  ga.triplets = triplets;
  ga.groups.assign(L, {});

  std::vector<int> unassigned = sta_ids;
  std::sort(unassigned.begin(), unassigned.end());
  std::vector<double> current_value(L, 0.0);  // f_l(S_l), cached per group

  // Candidate values survive across rounds until their group changes.
  std::map<std::pair<std::size_t, int>, double> memo;

  while (!unassigned.empty()) {
    struct Candidate {
      std::size_t l;
      int sta;
      double gain;
    };
    std::vector<Candidate> cand;
    cand.reserve(L * unassigned.size());
    for (std::size_t l = 0; l < L; ++l)
      for (int m : unassigned) cand.push_back({l, m, 0.0});

    std::vector<std::size_t> to_eval;
    for (std::size_t c = 0; c < cand.size(); ++c) {
      auto it = memo.find({cand[c].l, cand[c].sta});
      if (it == memo.end()) to_eval.push_back(c);
    }
    std::vector<double> fresh(to_eval.size(), 0.0);
    parallel_for(to_eval.size(), jobs, [&](std::size_t idx) {
      const auto& cd = cand[to_eval[idx]];
      std::vector<int> next = ga.groups[cd.l];
      next.push_back(cd.sta);
      std::sort(next.begin(), next.end());
      fresh[idx] = f(cd.l, next);
    });
    for (std::size_t idx = 0; idx < to_eval.size(); ++idx) {
      const auto& cd = cand[to_eval[idx]];
      memo[{cd.l, cd.sta}] = fresh[idx];
    }
    for (auto& cd : cand) cd.gain = memo.at({cd.l, cd.sta}) - current_value[cd.l];

    const Candidate* best = nullptr;
    for (const auto& cd : cand) {
      if (!best || cd.gain > best->gain ||
          (cd.gain == best->gain &&
           (cd.l < best->l || (cd.l == best->l && cd.sta < best->sta)))) {
        best = &cd;
      }
    }
    ga.groups[best->l].push_back(best->sta);
    std::sort(ga.groups[best->l].begin(), ga.groups[best->l].end());
    current_value[best->l] = memo.at({best->l, best->sta});
    unassigned.erase(std::find(unassigned.begin(), unassigned.end(), best->sta));
    // Entries for the changed group are stale now.
    for (auto it = memo.begin(); it != memo.end();) {
      if (it->first.first == best->l) it = memo.erase(it);
      else ++it;
    }
  }
  return ga;
}

/// Simulation-backed greedy grouping.
inline GroupAssignment greedy_grouping(const GlobalConfig& cfg,
                                       const std::vector<StaProfile>& stas,
                                       const std::vector<TwtTriplet>& triplets,
                                       const EvalSpec& spec, unsigned jobs = 1) {
  std::vector<int> ids;
  ids.reserve(stas.size());
  for (const auto& s : stas) ids.push_back(s.id);
  ValuationFn f = [&](std::size_t l, const std::vector<int>& members) {
    return evaluate_group(cfg, stas, members, triplets[l], spec.ra, spec).value;
  };
  return greedy_grouping_core(ids, triplets, f, jobs);
}

/// Round-robin partitioner: stations in ascending id fill group 1 up to
/// floor((M + L - 1) / L) members, then group 2, and so on.
inline GroupAssignment rr_grouping(const std::vector<int>& sta_ids,
                                   const std::vector<TwtTriplet>& triplets) {
  const std::size_t L = triplets.size();
  if (L == 0) throw ConfigError("rr grouping needs at least one group");
  GroupAssignment ga;
  ga.triplets = triplets;
  ga.groups.assign(L, {});
  std::vector<int> ids = sta_ids;
  std::sort(ids.begin(), ids.end());
  const std::size_t cap = (ids.size() + L - 1) / L;
  std::size_t l = 0;
  for (int id : ids) {
    while (ga.groups[l].size() >= cap) ++l;
    ga.groups[l].push_back(id);
  }
  return ga;
}

inline GroupAssignment rr_grouping(int num_stas, const std::vector<TwtTriplet>& triplets) {
  std::vector<int> ids(static_cast<std::size_t>(num_stas));
  std::iota(ids.begin(), ids.end(), 1);
  return rr_grouping(ids, triplets);
}

}  // namespace twtsim
