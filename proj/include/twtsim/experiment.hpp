#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "twtsim/grouping.hpp"
#include "twtsim/sim.hpp"
#include "twtsim/util.hpp"

namespace twtsim {

struct GroupingConfig {
  GroupingRoutine routine = GroupingRoutine::rr;
  std::vector<TwtTriplet> triplets;
  std::vector<std::vector<int>> fixed_groups;  // used when routine == fixed
  EvalSpec eval;
  bool eval_ra_explicit = false;  // config pinned eval.ra; else follow the run's RA
};

struct SweepConfig {
  std::string axis;  // "p_avg" | "num_stas"
  std::vector<double> values;
  std::vector<std::pair<GroupingRoutine, RaRoutine>> combos;
  Block horizon_blocks = 0;  // 0 = use the global horizon
};

struct Scenario {
  GlobalConfig global;
  std::vector<StaProfile> stas;
  GroupingConfig grouping;
  RaRoutine ra = RaRoutine::dpp;
  std::optional<SweepConfig> sweep;
};

// ---------------------------------------------------------------------------
// Realistic traffic station factory (BV / CBR-1 / CBR-2 cycling)
// ---------------------------------------------------------------------------

inline Block blocks_for_seconds(double seconds, double ftt) {
  return std::max<Block>(1, std::llround(seconds / ftt));
}

/// Station m of the station-count sweep: traffic model cycles through
/// buffered video, CBR-1 (3 KB / 150 ms) and CBR-2 (40 KB / 90 ms), with the
/// matching deadlines of 30, 150 and 90 ms.
inline StaProfile make_realistic_sta(int id, const StaProfile& base, double ftt) {
  StaProfile s = base;
  s.id = id;
  switch ((id - 1) % 3) {
    case 0: {
      BufferedVideoTraffic bv;
      s.traffic = bv;
      s.payload_bits = bv.packet_bytes * 8.0;
      s.deadline_blocks = blocks_for_seconds(0.030, ftt);
      break;
    }
    case 1: {
      s.traffic = CbrTraffic{3000.0, blocks_for_seconds(0.150, ftt)};
      s.deadline_blocks = blocks_for_seconds(0.150, ftt);
      break;
    }
    default: {
      s.traffic = CbrTraffic{40000.0, blocks_for_seconds(0.090, ftt)};
      s.deadline_blocks = blocks_for_seconds(0.090, ftt);
      break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Grouping dispatch
// ---------------------------------------------------------------------------

inline GroupAssignment make_grouping(const GlobalConfig& cfg,
                                     const std::vector<StaProfile>& stas,
                                     const GroupingConfig& gcfg, RaRoutine run_ra,
                                     unsigned jobs = 1) {
  if (gcfg.triplets.empty()) throw ConfigError("grouping.triplets must be nonempty");
  std::vector<int> ids;
  ids.reserve(stas.size());
  for (const auto& s : stas) ids.push_back(s.id);
  switch (gcfg.routine) {
    case GroupingRoutine::rr:
      return rr_grouping(ids, gcfg.triplets);
    case GroupingRoutine::greedy: {
      EvalSpec spec = gcfg.eval;
      if (!gcfg.eval_ra_explicit) spec.ra = run_ra;
      return greedy_grouping(cfg, stas, gcfg.triplets, spec, jobs);
    }
    case GroupingRoutine::fixed: {
      GroupAssignment ga;
      ga.groups = gcfg.fixed_groups;
      ga.triplets = gcfg.triplets;
      if (ga.groups.size() != ga.triplets.size())
        throw ConfigError("fixed grouping must list one member set per triplet");
      const auto rep = validate_partition(ga, ids);
      if (!rep.ok) throw ConfigError(rep.message());
      return ga;
    }
  }
  throw ConfigError("unhandled grouping routine");
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

struct SweepRow {
  double axis_value = 0;
  GroupingRoutine grouping = GroupingRoutine::rr;
  RaRoutine ra = RaRoutine::dpp;
  std::uint64_t seed = 0;
  double system_timely_throughput = 0;
  std::vector<std::pair<int, double>> per_sta;  // (id, timely throughput)
  long violations = 0;
};

struct SweepSummaryRow {
  double axis_value = 0;
  GroupingRoutine grouping = GroupingRoutine::rr;
  RaRoutine ra = RaRoutine::dpp;
  std::size_t n = 0;
  double mean = 0;
  double stderr_ = 0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
  std::vector<SweepSummaryRow> summary;
  int max_stas = 0;
};

/// Station list for one sweep point.
inline std::vector<StaProfile> stas_for_point(const Scenario& sc,
                                              const std::string& axis, double value) {
  if (axis == "p_avg") {
    auto stas = sc.stas;
    for (auto& s : stas) s.p_avg = value;
    return stas;
  }
  if (axis == "num_stas") {
    const int m = static_cast<int>(std::llround(value));
    if (m < 1) throw ConfigError("num_stas sweep values must be >= 1");
    StaProfile base = sc.stas.empty() ? StaProfile{} : sc.stas.front();
    std::vector<StaProfile> stas;
    stas.reserve(static_cast<std::size_t>(m));
    for (int id = 1; id <= m; ++id)
      stas.push_back(make_realistic_sta(id, base, sc.global.ftt_seconds));
    return stas;
  }
  throw ConfigError("sweep axis must be 'p_avg' or 'num_stas'");
}

/// Runs every (axis value x combo x seed) episode. Grouping is recomputed
/// for each value/combo pair, so station-set changes regroup as required.
inline SweepResult sweep(const Scenario& sc, const std::vector<std::uint64_t>& seeds,
                         unsigned jobs = 1) {
  if (!sc.sweep) throw ConfigError("config has no sweep section");
  const auto& sw = *sc.sweep;
  if (sw.values.empty()) throw ConfigError("sweep.values must be nonempty");
  if (sw.combos.empty()) throw ConfigError("sweep.combos must be nonempty");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  const Block horizon = sw.horizon_blocks > 0 ? sw.horizon_blocks
                                              : sc.global.horizon_blocks;

  SweepResult out;
  out.axis = sw.axis;
  for (double value : sw.values) {
    const auto stas = stas_for_point(sc, sw.axis, value);
    out.max_stas = std::max(out.max_stas, static_cast<int>(stas.size()));
    for (const auto& [grouping, ra] : sw.combos) {
      GroupingConfig gcfg = sc.grouping;
      gcfg.routine = grouping;
      const auto ga = make_grouping(sc.global, stas, gcfg, ra, jobs);

      std::vector<SweepRow> rows(seeds.size());
      parallel_for(seeds.size(), jobs, [&](std::size_t si) {
        const auto em = run_episode(sc.global, stas, ga, ra, horizon, seeds[si]);
        SweepRow row;
        row.axis_value = value;
        row.grouping = grouping;
        row.ra = ra;
        row.seed = seeds[si];
        row.system_timely_throughput = em.system_timely_throughput;
        row.violations = em.violations.total();
        for (const auto& sm : em.stas)
          row.per_sta.emplace_back(sm.id, sm.timely_throughput);
        rows[si] = std::move(row);
      });

      std::vector<double> vals;
      vals.reserve(rows.size());
      for (auto& row : rows) {
        vals.push_back(row.system_timely_throughput);
        out.rows.push_back(std::move(row));
      }
      const auto ms = mean_stderr(vals);
      out.summary.push_back({value, grouping, ra, ms.n, ms.mean, ms.stderr_});
    }
  }
  return out;
}

}  // namespace twtsim
