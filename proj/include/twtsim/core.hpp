#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace twtsim {

/// Bad or inconsistent configuration (CLI maps this to exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Internal invariant violation; aborts the replication (CLI exit code 3).
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

using Block = std::int64_t;  // block indices are 1-based

// ---------------------------------------------------------------------------
// Traffic model declarations (generators live in traffic.hpp)
// ---------------------------------------------------------------------------

/// Batch of `batch_size` packets arrives with probability `prob` each block.
struct BernoulliTraffic {
  int batch_size = 10;
  double prob = 0.7;
};

/// Fixed burst of `burst_bytes` every `interval_blocks` blocks.
struct CbrTraffic {
  double burst_bytes = 3000.0;
  Block interval_blocks = 150;
};

/// Video frames at `fps`, frame size Weibull-distributed, fragmented into
/// fixed-size packets. Scale is derived from the target rate when zero.
struct BufferedVideoTraffic {
  double fps = 30.0;
  double weibull_shape = 0.8112;
  double weibull_scale = 0.0;  // bytes; 0 = derive from target_rate_bps
  double packet_bytes = 1500.0;
  double target_rate_bps = 12e6;
  int max_frame_packets = 256;  // hard bound on one frame's packet count
};

using TrafficModel = std::variant<BernoulliTraffic, CbrTraffic, BufferedVideoTraffic>;

// ---------------------------------------------------------------------------
// Static station / schedule configuration
// ---------------------------------------------------------------------------

struct StaProfile {
  int id = 0;                 // 1-based station index
  double weight = 1.0;        // alpha_m >= 0
  double payload_bits = 12000.0;
  Block deadline_blocks = 30;
  long buffer_cap = 50;       // packets
  double p_avg = 0.5;         // watts
  TrafficModel traffic = BernoulliTraffic{};
};

/// Periodic wake schedule: first service period starts at block `offset`,
/// repeats every `wake_interval` blocks and spans `sp` blocks.
struct TwtTriplet {
  Block offset_blocks = 0;
  Block wake_interval_blocks = 1;
  Block sp_blocks = 1;
};

/// True iff block t falls inside some service period of the triplet.
/// The SP window is [o + n*tau, o + n*tau + zeta - 1], n = 0, 1, ...
inline bool is_active(const TwtTriplet& tw, Block t) {
  const Block r = t - tw.offset_blocks;
  if (r < 0) return false;
  return (r % tw.wake_interval_blocks) < tw.sp_blocks;
}

/// Partition of station ids into TWT groups; groups[l] pairs with triplets[l].
struct GroupAssignment {
  std::vector<std::vector<int>> groups;
  std::vector<TwtTriplet> triplets;

  std::size_t num_groups() const { return groups.size(); }
};

struct PartitionReport {
  bool ok = true;
  std::vector<int> duplicated;
  std::vector<int> missing;

  std::string message() const {
    if (ok) return "ok";
    std::ostringstream os;
    os << "invalid partition:";
    if (!duplicated.empty()) {
      os << " duplicated stas {";
      for (std::size_t i = 0; i < duplicated.size(); ++i)
        os << (i ? "," : "") << duplicated[i];
      os << "}";
    }
    if (!missing.empty()) {
      os << " missing stas {";
      for (std::size_t i = 0; i < missing.size(); ++i)
        os << (i ? "," : "") << missing[i];
      os << "}";
    }
    return os.str();
  }
};

/// Checks disjointness and coverage of `ga` against the universe of ids.
inline PartitionReport validate_partition(const GroupAssignment& ga,
                                          const std::vector<int>& universe) {
  PartitionReport rep;
  std::set<int> seen;
  std::set<int> dup;
  for (const auto& g : ga.groups) {
    for (int id : g) {
      if (!seen.insert(id).second) dup.insert(id);
    }
  }
  for (int id : universe) {
    if (!seen.count(id)) rep.missing.push_back(id);
  }
  std::set<int> uni(universe.begin(), universe.end());
  for (int id : seen) {
    if (!uni.count(id)) dup.insert(id);  // id outside the universe
  }
  rep.duplicated.assign(dup.begin(), dup.end());
  rep.ok = rep.duplicated.empty() && rep.missing.empty();
  return rep;
}

/// Universe {1..M} overload.
inline PartitionReport validate_partition(const GroupAssignment& ga, int num_stas) {
  std::vector<int> universe(static_cast<std::size_t>(num_stas));
  std::iota(universe.begin(), universe.end(), 1);
  return validate_partition(ga, universe);
}

struct SpOverlap {
  std::size_t group_a = 0;
  std::size_t group_b = 0;
  Block block = 0;
};

/// Finds the first block where two triplets' service periods collide.
/// The schedule model assigns all RUs to the single active group, so
/// overlapping SPs are a configuration error.
inline std::optional<SpOverlap> find_sp_overlap(const std::vector<TwtTriplet>& tws) {
  for (std::size_t a = 0; a < tws.size(); ++a) {
    for (std::size_t b = a + 1; b < tws.size(); ++b) {
      const Block lcm = std::lcm(tws[a].wake_interval_blocks, tws[b].wake_interval_blocks);
      const Block start = 1;
      const Block end = std::max(tws[a].offset_blocks, tws[b].offset_blocks) + 2 * lcm;
      for (Block t = start; t <= end; ++t) {
        if (is_active(tws[a], t) && is_active(tws[b], t))
          return SpOverlap{a, b, t};
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Global configuration
// ---------------------------------------------------------------------------

struct GlobalConfig {
  int num_rus = 4;
  std::vector<double> ru_bandwidth_hz;  // size num_rus
  double noise_power_w = 2e-7;
  double ftt_seconds = 1e-3;
  double p_max = 1.0;
  std::vector<double> power_levels = {0.2, 0.4, 0.6, 0.8, 1.0};  // ascending
  std::vector<double> gain_set = {10.0, 0.1, 0.001};
  std::vector<double> gain_probs;  // empty = uniform over gain_set
  double v_param = 1e4;
  Block horizon_blocks = 100000;
  std::uint64_t seed = 1;
  long a_max_override = 0;  // 0 = derive from traffic models

  double bandwidth(int ru) const {
    return ru_bandwidth_hz.empty() ? 8e6 : ru_bandwidth_hz[static_cast<std::size_t>(ru)];
  }

  void normalize() {
    if (ru_bandwidth_hz.empty()) ru_bandwidth_hz.assign(static_cast<std::size_t>(num_rus), 8e6);
    if (ru_bandwidth_hz.size() == 1 && num_rus > 1)
      ru_bandwidth_hz.assign(static_cast<std::size_t>(num_rus), ru_bandwidth_hz[0]);
  }

  void validate() const {
    if (num_rus < 1) throw ConfigError("num_rus must be >= 1");
    if (!ru_bandwidth_hz.empty() &&
        ru_bandwidth_hz.size() != static_cast<std::size_t>(num_rus))
      throw ConfigError("ru_bandwidth_hz must have one entry per RU");
    for (double b : ru_bandwidth_hz)
      if (b <= 0) throw ConfigError("ru_bandwidth_hz entries must be > 0");
    if (noise_power_w <= 0) throw ConfigError("noise_power_w must be > 0");
    if (ftt_seconds <= 0) throw ConfigError("ftt_seconds must be > 0");
    if (p_max <= 0) throw ConfigError("p_max must be > 0");
    if (power_levels.empty()) throw ConfigError("power_levels must be nonempty");
    if (!std::is_sorted(power_levels.begin(), power_levels.end()))
      throw ConfigError("power_levels must be sorted ascending");
    for (double p : power_levels) {
      if (p <= 0) throw ConfigError("power levels must be > 0");
      if (p > p_max) throw ConfigError("all power levels must be <= p_max");
    }
    if (gain_set.empty()) throw ConfigError("gain_set must be nonempty");
    for (double h : gain_set)
      if (h <= 0) throw ConfigError("gain_set values must be > 0");
    if (!gain_probs.empty() && gain_probs.size() != gain_set.size())
      throw ConfigError("gain_probs must match gain_set length");
    if (v_param <= 0) throw ConfigError("v_param must be > 0");
    if (horizon_blocks < 1) throw ConfigError("horizon_blocks must be >= 1");
  }
};

inline void validate_profile(const StaProfile& sta, const GlobalConfig& cfg) {
  if (sta.weight < 0) throw ConfigError("sta weight must be >= 0");
  if (sta.payload_bits <= 0) throw ConfigError("payload_bits must be > 0");
  if (sta.deadline_blocks < 1) throw ConfigError("deadline_blocks must be >= 1");
  if (sta.buffer_cap < 1) throw ConfigError("buffer_cap must be >= 1");
  if (sta.p_avg < 0 || sta.p_avg > cfg.p_max)
    throw ConfigError("p_avg must be in [0, p_max]");
}

inline void validate_triplet(const TwtTriplet& tw) {
  if (tw.wake_interval_blocks < 1) throw ConfigError("wake_interval_blocks must be >= 1");
  if (tw.sp_blocks < 1 || tw.sp_blocks > tw.wake_interval_blocks)
    throw ConfigError("sp_blocks must be in [1, wake_interval_blocks]");
  if (tw.offset_blocks < 0) throw ConfigError("offset_blocks must be >= 0");
}

}  // namespace twtsim
