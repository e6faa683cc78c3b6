#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "twtsim/assignment.hpp"
#include "twtsim/channel.hpp"
#include "twtsim/core.hpp"
#include "twtsim/phy.hpp"

namespace twtsim {

enum class RaRoutine { dpp, rr, greedy, gbu };

inline const char* to_string(RaRoutine r) {
  switch (r) {
    case RaRoutine::dpp: return "dpp";
    case RaRoutine::rr: return "rr";
    case RaRoutine::greedy: return "greedy";
    case RaRoutine::gbu: return "gbu";
  }
  return "?";
}

inline RaRoutine parse_ra_routine(const std::string& s) {
  if (s == "dpp") return RaRoutine::dpp;
  if (s == "rr") return RaRoutine::rr;
  if (s == "greedy") return RaRoutine::greedy;
  if (s == "gbu") return RaRoutine::gbu;
  throw ConfigError("unknown ra routine '" + s + "' (expected dpp|rr|greedy|gbu)");
}

/// Virtual power-queue backlog update:
/// G <- max(G - p_avg + p_actual, 0), one step per block.
inline double virtual_queue_update(double g, double p_actual, double p_avg) {
  return std::max(g - p_avg + p_actual, 0.0);
}

struct VirtualQueues {
  std::vector<double> g;  // one backlog per station, >= 0

  void update(std::size_t m, double p_actual, double p_avg) {
    g[m] = virtual_queue_update(g[m], p_actual, p_avg);
  }
};

/// One station's view inside a slot observation.
struct SlotStaView {
  int sta_id = 0;            // global 1-based id
  long buffer_start = 0;     // B_m(t), before this block's arrivals
  long arrivals = 0;         // a_m(t), gross batch size
  long transmittable = 0;    // min(B + a, cap): queue length after admission
  long buffer_cap = 0;
  double payload_bits = 0;
  double g_backlog = 0;      // virtual queue G_m(t)
  double p_avg = 0;
  double spent_energy = 0;   // watt-blocks through block t-1
  std::vector<double> gains;  // h_{m,k}(t) per RU
};

struct SlotObservation {
  Block t = 0;
  std::vector<SlotStaView> stas;  // active stations, ascending id
};

/// One scheduled (station, RU) pair.
struct RaPair {
  int sta_index = 0;   // index into SlotObservation::stas
  int ru = 0;
  double power_w = 0;
  long scheduled_pkts = 0;  // packet count the routine planned with
  double cost = 0;          // routine-specific objective contribution
};

struct RaDecision {
  std::vector<RaPair> pairs;
  double objective = 0;  // sum of pair costs (dpp) / values (greedy)
};

// ---------------------------------------------------------------------------
// DPP-RA
// ---------------------------------------------------------------------------

struct DppPairChoice {
  double power = 0;
  double cost = 0;
  long scheduled = 0;
};

/// Best power level for one (station, RU) pair under the per-slot program:
/// minimize G_m * P - (B_m + V) * R_{m,k}(P) over P in the power set.
/// Ties break toward smaller power.
inline DppPairChoice dpp_pair_cost(const SlotStaView& sv, double gain, double bandwidth_hz,
                                   const GlobalConfig& cfg) {
  DppPairChoice best;
  bool have = false;
  for (double p : cfg.power_levels) {
    const double r_bps = rate_bps({p, gain, bandwidth_hz, cfg.noise_power_w});
    const long sched = timely_throughput(r_bps, sv.payload_bits, cfg.ftt_seconds,
                                         sv.transmittable, sv.buffer_cap);
    const double cost = sv.g_backlog * p -
                        (static_cast<double>(sv.buffer_start) + cfg.v_param) *
                            static_cast<double>(sched);
    if (!have || cost < best.cost) {
      best = {p, cost, sched};
      have = true;
    }
  }
  return best;
}

/// Per-slot DPP decision: build the pairwise cost matrix, solve the
/// min-cost assignment, and keep only pairs that strictly lower the
/// objective. A pair whose best cost is >= 0 is equivalent to not
/// transmitting at all, so it is dropped (zero-power convention).
inline RaDecision dpp_step(const SlotObservation& obs, const GlobalConfig& cfg) {
  RaDecision dec;
  const int m = static_cast<int>(obs.stas.size());
  const int u = cfg.num_rus;
  if (m == 0 || u == 0) return dec;

  std::vector<DppPairChoice> choice(static_cast<std::size_t>(m) * static_cast<std::size_t>(u));
  CostMatrix cm(m, u);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < u; ++k) {
      const auto& sv = obs.stas[static_cast<std::size_t>(i)];
      const auto c = dpp_pair_cost(sv, sv.gains[static_cast<std::size_t>(k)],
                                   cfg.bandwidth(k), cfg);
      choice[static_cast<std::size_t>(i) * static_cast<std::size_t>(u) +
             static_cast<std::size_t>(k)] = c;
      cm.at(i, k) = std::min(c.cost, 0.0);
    }
  }
  const auto sol = solve_min_assignment(cm);
  for (const auto& [i, k] : sol.pairs) {
    const auto& c = choice[static_cast<std::size_t>(i) * static_cast<std::size_t>(u) +
                           static_cast<std::size_t>(k)];
    if (c.cost >= 0) continue;
    dec.pairs.push_back({i, k, c.power, c.scheduled, c.cost});
    dec.objective += c.cost;
  }
  return dec;
}

// ---------------------------------------------------------------------------
// Budgeted baselines (RR, Greedy, GBU)
// ---------------------------------------------------------------------------

/// Largest power level affordable at block t given the energy already spent:
/// the budget is max(0, p_avg * t - spent); returns 0 when no level fits.
inline double budget_power(Block t, double spent_energy, double p_avg, double p_max,
                           const std::vector<double>& levels) {
  const double budget = std::max(0.0, p_avg * static_cast<double>(t) - spent_energy);
  const double lim = std::min(budget, p_max);
  double best = 0.0;
  for (double p : levels) {
    if (p <= lim) best = p;  // levels are ascending
  }
  return best;
}

/// Round-robin RU allocation, channel- and buffer-blind. The rotation index
/// advances by one on every invocation. With fewer stations than RUs the RU
/// side rotates instead, so a lone station still cycles through RUs.
inline RaDecision rr_step(const SlotObservation& obs, long& rotation,
                          const GlobalConfig& cfg) {
  RaDecision dec;
  const int m = static_cast<int>(obs.stas.size());
  const int u = cfg.num_rus;
  const long rot = rotation++;
  if (m == 0 || u == 0) return dec;

  std::vector<std::pair<int, int>> picks;  // (sta index, ru)
  if (m >= u) {
    for (int k = 0; k < u; ++k)
      picks.emplace_back(static_cast<int>((rot + k) % m), k);
  } else {
    for (int i = 0; i < m; ++i)
      picks.emplace_back(i, static_cast<int>((rot + i) % u));
  }
  std::sort(picks.begin(), picks.end());
  for (const auto& [i, k] : picks) {
    const auto& sv = obs.stas[static_cast<std::size_t>(i)];
    const double p = budget_power(obs.t, sv.spent_energy, sv.p_avg, cfg.p_max,
                                  cfg.power_levels);
    if (p <= 0) continue;
    dec.pairs.push_back({i, k, p, 0, 0.0});
  }
  return dec;
}

/// Greedy RA: powers from the budget rule, then a maximum-value assignment
/// over the timely-throughput matrix (buffer-aware) or the raw throughput
/// matrix (buffer-unaware). Realized transmissions are still clamped by the
/// actual buffer contents in either case.
inline RaDecision greedy_step(const SlotObservation& obs, const GlobalConfig& cfg,
                              bool buffer_aware) {
  RaDecision dec;
  const int m = static_cast<int>(obs.stas.size());
  const int u = cfg.num_rus;
  if (m == 0 || u == 0) return dec;

  std::vector<double> power(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& sv = obs.stas[static_cast<std::size_t>(i)];
    power[static_cast<std::size_t>(i)] =
        budget_power(obs.t, sv.spent_energy, sv.p_avg, cfg.p_max, cfg.power_levels);
  }

  CostMatrix value(m, u);
  std::vector<long> sched(static_cast<std::size_t>(m) * static_cast<std::size_t>(u), 0);
  for (int i = 0; i < m; ++i) {
    const auto& sv = obs.stas[static_cast<std::size_t>(i)];
    const double p = power[static_cast<std::size_t>(i)];
    for (int k = 0; k < u; ++k) {
      long pkts = 0;
      if (p > 0) {
        const double r_bps = rate_bps({p, sv.gains[static_cast<std::size_t>(k)],
                                       cfg.bandwidth(k), cfg.noise_power_w});
        pkts = buffer_aware
                   ? timely_throughput(r_bps, sv.payload_bits, cfg.ftt_seconds,
                                       sv.transmittable, sv.buffer_cap)
                   : rate_packets(r_bps, sv.payload_bits, cfg.ftt_seconds);
      }
      sched[static_cast<std::size_t>(i) * static_cast<std::size_t>(u) +
            static_cast<std::size_t>(k)] = pkts;
      value.at(i, k) = static_cast<double>(pkts);
    }
  }
  const auto sol = solve_max_assignment(value);
  for (const auto& [i, k] : sol.pairs) {
    const double p = power[static_cast<std::size_t>(i)];
    if (p <= 0) continue;
    const long pkts = sched[static_cast<std::size_t>(i) * static_cast<std::size_t>(u) +
                            static_cast<std::size_t>(k)];
    dec.pairs.push_back({i, k, p, pkts, static_cast<double>(pkts)});
    dec.objective += static_cast<double>(pkts);
  }
  return dec;
}

}  // namespace twtsim
