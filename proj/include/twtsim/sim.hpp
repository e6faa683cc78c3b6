#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "twtsim/channel.hpp"
#include "twtsim/core.hpp"
#include "twtsim/queueing.hpp"
#include "twtsim/ra.hpp"
#include "twtsim/traffic.hpp"

namespace twtsim {

struct ViolationCounters {
  long schedule = 0;    // transmission outside the station's service period
  long power_cap = 0;   // allocated power above p_max
  long buffer_bound = 0;
  long conservation = 0;

  bool any() const { return schedule || power_cap || buffer_bound || conservation; }
  long total() const { return schedule + power_cap + buffer_bound + conservation; }
};

struct StaMetrics {
  int id = 0;
  double weight = 1.0;
  long admitted = 0;
  long transmitted = 0;
  long discarded_overflow = 0;
  long discarded_expiry = 0;
  long final_buffer = 0;
  double offered_bits = 0;
  double energy = 0;              // watt-blocks
  double timely_throughput = 0;   // packets per block
  double avg_power_w = 0;
  double g_final = 0;
};

struct EpisodeMetrics {
  Block horizon = 0;
  std::uint64_t seed = 0;
  std::vector<StaMetrics> stas;
  double system_timely_throughput = 0;  // sum of weight * per-sta throughput
  ViolationCounters violations;
};

/// Per-block trace record handed to an observer; used by invariant tests.
struct BlockTrace {
  Block t = 0;
  int active_group = -1;
  struct Sta {
    int id = 0;
    long arrivals = 0;
    long transmitted = 0;
    long overflow_discards = 0;
    long expiry_discards = 0;
    long buffer_start = 0;
    long buffer_end = 0;
    double power = 0;
    double g_start = 0;
    double g_end = 0;
  };
  std::vector<Sta> stas;
};

using BlockObserver = std::function<void(const BlockTrace&)>;

struct RunOptions {
  BlockObserver observer;  // called once per block when set
};

/// Simulates one episode block by block.
///
/// Per block: arrivals are admitted (overflow discards oldest), the active
/// group's allocator is invoked, scheduled pairs transmit with the realized
/// buffer clamp, expiry runs at block end, then virtual power queues and
/// energy ledgers advance for every station.
inline EpisodeMetrics run_episode(const GlobalConfig& cfg,
                                  const std::vector<StaProfile>& stas,
                                  const GroupAssignment& ga, RaRoutine routine,
                                  Block horizon, std::uint64_t seed,
                                  const RunOptions& opts = {}) {
  GlobalConfig gc = cfg;
  gc.normalize();
  gc.validate();
  for (const auto& s : stas) validate_profile(s, gc);
  for (const auto& tw : ga.triplets) validate_triplet(tw);
  if (ga.groups.size() != ga.triplets.size())
    throw ConfigError("group list and triplet list must have equal length");

  std::vector<int> ids;
  ids.reserve(stas.size());
  for (const auto& s : stas) ids.push_back(s.id);
  const auto part = validate_partition(ga, ids);
  if (!part.ok) throw ConfigError(part.message());
  if (auto ov = find_sp_overlap(ga.triplets)) {
    throw ConfigError("service periods of groups " + std::to_string(ov->group_a + 1) +
                      " and " + std::to_string(ov->group_b + 1) +
                      " overlap at block " + std::to_string(ov->block));
  }

  const std::size_t n = stas.size();
  std::unordered_map<int, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[stas[i].id] = i;

  // Members of each group in ascending id order.
  std::vector<std::vector<int>> members(ga.groups.size());
  for (std::size_t l = 0; l < ga.groups.size(); ++l) {
    members[l] = ga.groups[l];
    std::sort(members[l].begin(), members[l].end());
  }

  const StreamSeeder seeder{seed};
  const ChannelSampler channel(gc.gain_set, gc.gain_probs,
                               seeder.derive(kStreamChannel));

  std::vector<TrafficGenerator> gens;
  std::vector<StaBuffer> bufs;
  gens.reserve(n);
  bufs.reserve(n);
  for (const auto& s : stas) {
    gens.emplace_back(s.traffic, s.payload_bits, gc.ftt_seconds,
                      seeder.stream(kStreamTraffic, static_cast<std::uint64_t>(s.id)));
    bufs.emplace_back(s.buffer_cap, s.deadline_blocks);
  }
  VirtualQueues vq{std::vector<double>(n, 0.0)};
  std::vector<double> energy(n, 0.0);
  std::vector<double> offered(n, 0.0);
  long rr_rotation = 0;

  EpisodeMetrics em;
  em.horizon = horizon;
  em.seed = seed;

  std::vector<long> arrivals(n), realized(n), d_over(n), d_exp(n), b_start(n);
  std::vector<double> power_now(n), g_start(n);

  for (Block t = 1; t <= horizon; ++t) {
    // (i)-(ii) arrivals and admission
    for (std::size_t i = 0; i < n; ++i) {
      b_start[i] = bufs[i].size();
      g_start[i] = vq.g[i];
      const auto batch = gens[i].at_block(t);
      arrivals[i] = batch.count;
      offered[i] += batch.offered_bits;
      d_over[i] = bufs[i].admit(batch.count, t);
      realized[i] = 0;
      d_exp[i] = 0;
      power_now[i] = 0.0;
    }

    // (iii) active group for this block (overlaps were rejected above)
    int active_group = -1;
    for (std::size_t l = 0; l < ga.triplets.size(); ++l) {
      if (is_active(ga.triplets[l], t) && !members[l].empty()) {
        active_group = static_cast<int>(l);
        break;
      }
    }

    // (iv)-(vii) allocation and transmission
    if (active_group >= 0) {
      const auto& mem = members[static_cast<std::size_t>(active_group)];
      SlotObservation obs;
      obs.t = t;
      obs.stas.reserve(mem.size());
      for (int id : mem) {
        const std::size_t i = pos[id];
        SlotStaView sv;
        sv.sta_id = id;
        sv.buffer_start = b_start[i];
        sv.arrivals = arrivals[i];
        sv.transmittable = bufs[i].size();
        sv.buffer_cap = stas[i].buffer_cap;
        sv.payload_bits = stas[i].payload_bits;
        sv.g_backlog = vq.g[i];
        sv.p_avg = stas[i].p_avg;
        sv.spent_energy = energy[i];
        sv.gains.resize(static_cast<std::size_t>(gc.num_rus));
        for (int k = 0; k < gc.num_rus; ++k)
          sv.gains[static_cast<std::size_t>(k)] = channel.gain(id, k, t);
        obs.stas.push_back(std::move(sv));
      }

      RaDecision dec;
      switch (routine) {
        case RaRoutine::dpp: dec = dpp_step(obs, gc); break;
        case RaRoutine::rr: dec = rr_step(obs, rr_rotation, gc); break;
        case RaRoutine::greedy: dec = greedy_step(obs, gc, true); break;
        case RaRoutine::gbu: dec = greedy_step(obs, gc, false); break;
      }

      for (const auto& pr : dec.pairs) {
        const auto& sv = obs.stas[static_cast<std::size_t>(pr.sta_index)];
        const std::size_t i = pos[sv.sta_id];
        if (pr.power_w > gc.p_max + 1e-12) ++em.violations.power_cap;
        if (!is_active(ga.triplets[static_cast<std::size_t>(active_group)], t))
          ++em.violations.schedule;
        const double r_bps =
            rate_bps({pr.power_w, sv.gains[static_cast<std::size_t>(pr.ru)],
                      gc.bandwidth(pr.ru), gc.noise_power_w});
        const long r = timely_throughput(r_bps, sv.payload_bits, gc.ftt_seconds,
                                         bufs[i].size(), stas[i].buffer_cap);
        bufs[i].transmit(r, t);
        realized[i] = r;
        // A station with nothing to send stays silent on its RU, so the
        // assignment only consumes power when packets actually go out.
        if (r > 0) power_now[i] += pr.power_w;
      }
    }

    // (vii)-(viii) expiry, virtual queues, ledgers
    for (std::size_t i = 0; i < n; ++i) {
      d_exp[i] = bufs[i].expire(t);
      vq.update(i, power_now[i], stas[i].p_avg);
      energy[i] += power_now[i];
      if (bufs[i].size() > stas[i].buffer_cap) ++em.violations.buffer_bound;
    }

    if (opts.observer) {
      BlockTrace tr;
      tr.t = t;
      tr.active_group = active_group;
      tr.stas.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        tr.stas[i] = {stas[i].id,    arrivals[i], realized[i],
                      d_over[i],     d_exp[i],    b_start[i],
                      bufs[i].size(), power_now[i], g_start[i],
                      vq.g[i]};
      }
      opts.observer(tr);
    }
  }

  em.stas.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& sm = em.stas[i];
    sm.id = stas[i].id;
    sm.weight = stas[i].weight;
    sm.admitted = bufs[i].admitted();
    sm.transmitted = bufs[i].transmitted();
    sm.discarded_overflow = bufs[i].discarded_overflow();
    sm.discarded_expiry = bufs[i].discarded_expiry();
    sm.final_buffer = bufs[i].size();
    sm.offered_bits = offered[i];
    sm.energy = energy[i];
    sm.timely_throughput =
        static_cast<double>(sm.transmitted) / static_cast<double>(horizon);
    sm.avg_power_w = energy[i] / static_cast<double>(horizon);
    sm.g_final = vq.g[i];
    if (!bufs[i].conserved()) ++em.violations.conservation;
    em.system_timely_throughput += sm.weight * sm.timely_throughput;
  }
  return em;
}

/// Paper-style slack constant for the drift bound:
/// C = 1/2 * sum_m (p_avg^2 + p_max^2 + cap^2 + a_max^2).
inline double drift_bound_constant(const GlobalConfig& cfg,
                                   const std::vector<StaProfile>& stas) {
  const double a_max = static_cast<double>(
      cfg.a_max_override > 0 ? cfg.a_max_override : derive_a_max(stas));
  double c = 0;
  for (const auto& s : stas) {
    c += s.p_avg * s.p_avg + cfg.p_max * cfg.p_max +
         static_cast<double>(s.buffer_cap) * static_cast<double>(s.buffer_cap) +
         a_max * a_max;
  }
  return 0.5 * c;
}

}  // namespace twtsim
