#pragma once

#include <algorithm>
#include <deque>

#include "twtsim/core.hpp"

namespace twtsim {

/// Per-station deadline-bound FIFO buffer.
///
/// Within a block the event order is: admit (overflow discards oldest),
/// transmit (earliest expiry first), then expire at block end. A packet whose
/// expiry equals the current block is still transmittable in that block.
class StaBuffer {
 public:
  struct Packet {
    Block arrival_block = 0;
    Block expiry_block = 0;
  };

  struct StepResult {
    long buffer_after = 0;
    long transmitted = 0;
    long overflow_discards = 0;
    long expiry_discards = 0;
    long total_discards() const { return overflow_discards + expiry_discards; }
  };

  StaBuffer(long cap, Block deadline_blocks)
      : cap_(cap), deadline_(deadline_blocks) {
    if (cap < 1) throw ConfigError("buffer cap must be >= 1");
    if (deadline_blocks < 1) throw ConfigError("deadline must be >= 1");
  }

  long size() const { return static_cast<long>(q_.size()); }
  long cap() const { return cap_; }
  const std::deque<Packet>& packets() const { return q_; }

  long admitted() const { return admitted_; }
  long transmitted() const { return transmitted_; }
  long discarded_overflow() const { return discarded_overflow_; }
  long discarded_expiry() const { return discarded_expiry_; }

  /// Appends `count` packets with expiry t + deadline, then trims the oldest
  /// packets above capacity. Returns the number trimmed.
  long admit(long count, Block t) {
    if (count < 0) throw InvariantError("negative arrival count");
    admitted_ += count;
    for (long i = 0; i < count; ++i) q_.push_back({t, t + deadline_});
    long overflow = 0;
    while (size() > cap_) {
      q_.pop_front();
      ++overflow;
    }
    discarded_overflow_ += overflow;
    return overflow;
  }

  /// Removes `r` packets, earliest expiry first (arrival order on ties).
  long transmit(long r, Block t) {
    if (r > size())
      throw InvariantError("transmit count exceeds buffer length");
    for (long i = 0; i < r; ++i) pop_earliest_expiry(t);
    transmitted_ += r;
    return r;
  }

  /// Removes every packet with expiry_block <= t. Call after transmit.
  long expire(Block t) {
    long n = 0;
    if (sorted_) {
      while (!q_.empty() && q_.front().expiry_block <= t) {
        q_.pop_front();
        ++n;
      }
    } else {
      auto it = std::remove_if(q_.begin(), q_.end(),
                               [t](const Packet& p) { return p.expiry_block <= t; });
      n = static_cast<long>(std::distance(it, q_.end()));
      q_.erase(it, q_.end());
    }
    discarded_expiry_ += n;
    return n;
  }

  /// Full block update: admit, transmit, expire. The resulting length equals
  /// max{B + a - R - d, 0} with d the total discards of the block.
  StepResult step(long arrivals, long r, Block t) {
    StepResult res;
    res.overflow_discards = admit(arrivals, t);
    res.transmitted = transmit(r, t);
    res.expiry_discards = expire(t);
    res.buffer_after = size();
    return res;
  }

  /// Test hook: inserts one packet with an explicit expiry, keeping the queue
  /// usable even when expiries are not monotone in arrival order.
  void push_packet(Block arrival, Block expiry) {
    if (!q_.empty() && expiry < q_.back().expiry_block) sorted_ = false;
    q_.push_back({arrival, expiry});
    ++admitted_;
  }

  /// Conservation: admitted = transmitted + discarded + still queued.
  bool conserved() const {
    return admitted_ ==
           transmitted_ + discarded_overflow_ + discarded_expiry_ + size();
  }

 private:
  void pop_earliest_expiry(Block t) {
    if (sorted_) {
      if (q_.front().expiry_block < t)
        throw InvariantError("expired packet present at transmission time");
      q_.pop_front();
      return;
    }
    auto it = std::min_element(q_.begin(), q_.end(),
                               [](const Packet& a, const Packet& b) {
                                 if (a.expiry_block != b.expiry_block)
                                   return a.expiry_block < b.expiry_block;
                                 return a.arrival_block < b.arrival_block;
                               });
    if (it->expiry_block < t)
      throw InvariantError("expired packet present at transmission time");
    q_.erase(it);
  }

  std::deque<Packet> q_;
  long cap_;
  Block deadline_;
  bool sorted_ = true;  // admit() keeps expiries nondecreasing
  long admitted_ = 0;
  long transmitted_ = 0;
  long discarded_overflow_ = 0;
  long discarded_expiry_ = 0;
};

}  // namespace twtsim
