#pragma once

#include <algorithm>
#include <cmath>

#include "twtsim/core.hpp"

namespace twtsim {

struct LinkBudget {
  double power_w = 0.0;
  double gain = 1.0;
  double bandwidth_hz = 8e6;
  double noise_w = 2e-7;
};

/// Achievable rate rho(P, h, b) = b * log2(1 + P*h/N); zero power sends nothing.
/// Kept behind this function so a discrete MCS table could replace it.
inline double rate_bps(const LinkBudget& lb) {
  if (lb.power_w <= 0) return 0.0;
  return lb.bandwidth_hz * std::log2(1.0 + lb.power_w * lb.gain / lb.noise_w);
}

/// Packets deliverable in one block: the rate term floored to whole packets,
/// clamped by what is actually waiting and by the buffer capacity.
inline long timely_throughput(double rate_sum_bps, double payload_bits,
                              double ftt_seconds, long buffer_now, long buffer_cap) {
  if (payload_bits <= 0) throw ConfigError("payload_bits must be > 0");
  const double pkts = std::floor(ftt_seconds * rate_sum_bps / payload_bits);
  long r = pkts >= static_cast<double>(buffer_cap)
               ? buffer_cap
               : static_cast<long>(pkts);
  return std::min({r, buffer_now, buffer_cap});
}

/// Rate-limited packet count alone (no buffer clamp); the buffer-unaware
/// allocator builds its matrix from this.
inline long rate_packets(double rate_bps_value, double payload_bits, double ftt_seconds) {
  const double pkts = std::floor(ftt_seconds * rate_bps_value / payload_bits);
  return static_cast<long>(pkts);
}

}  // namespace twtsim
