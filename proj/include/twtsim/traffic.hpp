#pragma once

#include <cmath>
#include <variant>

#include "twtsim/core.hpp"
#include "twtsim/rng.hpp"

namespace twtsim {

/// Packets arriving at the start of one block. `offered_bits` is the payload
/// before padding the last fragment to a full packet; rate accounting uses it.
struct ArrivalBatch {
  long count = 0;
  double offered_bits = 0.0;
};

inline double bv_mean_frame_bytes(const BufferedVideoTraffic& bv) {
  return bv.target_rate_bps / (8.0 * bv.fps);
}

inline double bv_scale_bytes(const BufferedVideoTraffic& bv) {
  if (bv.weibull_scale > 0) return bv.weibull_scale;
  return bv_mean_frame_bytes(bv) / std::tgamma(1.0 + 1.0 / bv.weibull_shape);
}

inline Block bv_frame_period_blocks(const BufferedVideoTraffic& bv, double ftt_seconds) {
  return std::max<Block>(1, std::llround(1.0 / (bv.fps * ftt_seconds)));
}

inline long packets_for_bits(double bits, double payload_bits) {
  if (bits <= 0) return 0;
  return static_cast<long>(std::ceil(bits / payload_bits));
}

/// Largest batch the model can emit in one block (its A_max contribution).
inline long max_batch_packets(const TrafficModel& model, double payload_bits) {
  struct V {
    double beta;
    long operator()(const BernoulliTraffic& b) const { return b.batch_size; }
    long operator()(const CbrTraffic& c) const {
      return packets_for_bits(c.burst_bytes * 8.0, beta);
    }
    long operator()(const BufferedVideoTraffic& bv) const { return bv.max_frame_packets; }
  };
  return std::visit(V{payload_bits}, model);
}

/// Analytic mean offered rate of the model in bits per second.
inline double mean_rate_bps(const TrafficModel& model, double payload_bits,
                            double ftt_seconds) {
  struct V {
    double beta;
    double ftt;
    double operator()(const BernoulliTraffic& b) const {
      return b.prob * b.batch_size * beta / ftt;
    }
    double operator()(const CbrTraffic& c) const {
      if (c.burst_bytes <= 0) return 0.0;
      return c.burst_bytes * 8.0 / (static_cast<double>(c.interval_blocks) * ftt);
    }
    double operator()(const BufferedVideoTraffic& bv) const { return bv.target_rate_bps; }
  };
  return std::visit(V{payload_bits, ftt_seconds}, model);
}

/// Per-station arrival generator. Must be stepped through blocks 1, 2, ...
/// in order so the station's random substream stays aligned.
class TrafficGenerator {
 public:
  TrafficGenerator(const TrafficModel& model, double payload_bits,
                   double ftt_seconds, Rng rng)
      : model_(model), payload_bits_(payload_bits), ftt_(ftt_seconds), rng_(rng) {}

  ArrivalBatch at_block(Block t) {
    struct V {
      TrafficGenerator* self;
      Block t;
      ArrivalBatch operator()(const BernoulliTraffic& b) {
        const bool hit = self->rng_.bernoulli(b.prob);
        if (!hit || b.batch_size <= 0) return {};
        return {b.batch_size, b.batch_size * self->payload_bits_};
      }
      ArrivalBatch operator()(const CbrTraffic& c) {
        if (c.burst_bytes <= 0) return {};
        if ((t - 1) % c.interval_blocks != 0) return {};
        const double bits = c.burst_bytes * 8.0;
        return {packets_for_bits(bits, self->payload_bits_), bits};
      }
      ArrivalBatch operator()(const BufferedVideoTraffic& bv) {
        const Block period = bv_frame_period_blocks(bv, self->ftt_);
        if ((t - 1) % period != 0) return {};
        double bits = self->rng_.weibull(bv.weibull_shape, bv_scale_bytes(bv)) * 8.0;
        const double cap_bits = bv.max_frame_packets * self->payload_bits_;
        if (bits > cap_bits) bits = cap_bits;
        return {packets_for_bits(bits, self->payload_bits_), bits};
      }
    };
    return std::visit(V{this, t}, model_);
  }

  long max_batch() const { return max_batch_packets(model_, payload_bits_); }

 private:
  TrafficModel model_;
  double payload_bits_;
  double ftt_;
  Rng rng_;
};

/// A_max for a station set: the largest batch any configured model can emit.
inline long derive_a_max(const std::vector<StaProfile>& stas) {
  long a = 0;
  for (const auto& s : stas) a = std::max(a, max_batch_packets(s.traffic, s.payload_bits));
  return a;
}

}  // namespace twtsim
