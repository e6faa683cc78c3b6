#pragma once

// Shared scenario builders for tests: the bundled system/TWT parameter
// tables, expressed in code.

#include "twtsim/experiment.hpp"

namespace twtsim_test {

inline twtsim::StaProfile bernoulli_sta(int id, double p_avg = 0.5) {
  twtsim::StaProfile s;
  s.id = id;
  s.weight = 1.0;
  s.payload_bits = 12000.0;
  s.deadline_blocks = 30;
  s.buffer_cap = 50;
  s.p_avg = p_avg;
  s.traffic = twtsim::BernoulliTraffic{10, 0.7};
  return s;
}

inline std::vector<twtsim::TwtTriplet> table2_triplets() {
  return {{2, 30, 7}, {16, 150, 2}, {10, 90, 5}};
}

/// Eight Bernoulli stations, four RUs, the three bundled TWT triplets.
inline twtsim::Scenario tables12_scenario() {
  twtsim::Scenario sc;
  sc.global.num_rus = 4;
  sc.global.ru_bandwidth_hz.assign(4, 8e6);
  sc.global.noise_power_w = 2e-7;
  sc.global.ftt_seconds = 1e-3;
  sc.global.p_max = 1.0;
  sc.global.power_levels = {0.2, 0.4, 0.6, 0.8, 1.0};
  sc.global.gain_set = {10.0, 0.1, 0.001};
  sc.global.v_param = 1e4;
  sc.global.horizon_blocks = 100000;
  sc.global.seed = 1;
  for (int id = 1; id <= 8; ++id) sc.stas.push_back(bernoulli_sta(id));
  sc.grouping.routine = twtsim::GroupingRoutine::rr;
  sc.grouping.triplets = table2_triplets();
  sc.ra = twtsim::RaRoutine::dpp;
  return sc;
}

}  // namespace twtsim_test
