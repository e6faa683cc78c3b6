#pragma once

#include <vector>

#include "twtsim/core.hpp"
#include "twtsim/rng.hpp"

namespace twtsim {

/// M x U matrix of per-block channel power gains, rows indexed by 0-based
/// station position, columns by RU.
struct ChannelMatrix {
  int num_stas = 0;
  int num_rus = 0;
  std::vector<double> g;

  double at(int m, int k) const {
    return g[static_cast<std::size_t>(m) * static_cast<std::size_t>(num_rus) +
             static_cast<std::size_t>(k)];
  }
  double& at(int m, int k) {
    return g[static_cast<std::size_t>(m) * static_cast<std::size_t>(num_rus) +
             static_cast<std::size_t>(k)];
  }
};

/// Draws i.i.d. gains from a finite set. Gains are produced by hashing
/// (seed, sta id, ru, block), so a station's fading sequence does not depend
/// on which other stations are simulated alongside it.
class ChannelSampler {
 public:
  ChannelSampler(std::vector<double> gain_set, std::vector<double> gain_probs,
                 std::uint64_t stream_seed)
      : gains_(std::move(gain_set)), seed_(stream_seed) {
    if (gains_.empty()) throw ConfigError("gain_set must be nonempty");
    if (!gain_probs.empty()) {
      if (gain_probs.size() != gains_.size())
        throw ConfigError("gain_probs must match gain_set length");
      double total = 0;
      for (double p : gain_probs) {
        if (p < 0) throw ConfigError("gain_probs must be >= 0");
        total += p;
      }
      if (total <= 0) throw ConfigError("gain_probs must sum to > 0");
      cdf_.reserve(gain_probs.size());
      double acc = 0;
      for (double p : gain_probs) {
        acc += p / total;
        cdf_.push_back(acc);
      }
      cdf_.back() = 1.0;
    }
  }

  double gain(int sta_id, int ru, Block t) const {
    std::uint64_t h = mix_keys(seed_, static_cast<std::uint64_t>(sta_id));
    h = mix_keys(h, static_cast<std::uint64_t>(ru) + 0x5254ULL);
    h = mix_keys(h, static_cast<std::uint64_t>(t));
    return pick(u64_to_unit(h));
  }

  /// Full matrix for one block; row m holds the station `sta_ids[m]`.
  ChannelMatrix matrix_at(const std::vector<int>& sta_ids, int num_rus, Block t) const {
    ChannelMatrix cm;
    cm.num_stas = static_cast<int>(sta_ids.size());
    cm.num_rus = num_rus;
    cm.g.resize(sta_ids.size() * static_cast<std::size_t>(num_rus));
    for (int m = 0; m < cm.num_stas; ++m)
      for (int k = 0; k < num_rus; ++k)
        cm.at(m, k) = gain(sta_ids[static_cast<std::size_t>(m)], k, t);
    return cm;
  }

  const std::vector<double>& gain_set() const { return gains_; }

 private:
  double pick(double u) const {
    if (cdf_.empty()) {
      auto idx = static_cast<std::size_t>(u * static_cast<double>(gains_.size()));
      if (idx >= gains_.size()) idx = gains_.size() - 1;
      return gains_[idx];
    }
    for (std::size_t i = 0; i < cdf_.size(); ++i)
      if (u < cdf_[i]) return gains_[i];
    return gains_.back();
  }

  std::vector<double> gains_;
  std::vector<double> cdf_;
  std::uint64_t seed_;
};

/// Spec-level convenience: sample one M x U matrix for block t.
inline ChannelMatrix sample_channel(const std::vector<double>& gain_set, int num_stas,
                                    int num_rus, std::uint64_t stream_seed, Block t) {
  ChannelSampler sampler(gain_set, {}, stream_seed);
  std::vector<int> ids(static_cast<std::size_t>(num_stas));
  for (int i = 0; i < num_stas; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
  return sampler.matrix_at(ids, num_rus, t);
}

}  // namespace twtsim
