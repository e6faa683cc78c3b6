#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "twtsim/ra.hpp"
#include "twtsim/rng.hpp"

using namespace twtsim;

TEST_CASE("virtual queue update clamps at zero") {
  CHECK(virtual_queue_update(2.0, 1.0, 0.5) == Catch::Approx(2.5));
  CHECK(virtual_queue_update(0.3, 0.0, 0.5) == 0.0);
  CHECK(virtual_queue_update(0.0, 0.0, 0.0) == 0.0);
}

namespace {

GlobalConfig pair_cost_cfg() {
  GlobalConfig cfg;
  cfg.num_rus = 1;
  cfg.ru_bandwidth_hz = {2e6};
  cfg.noise_power_w = 2e-7;
  cfg.power_levels = {0.5, 1.0};
  cfg.p_max = 1.0;
  cfg.v_param = 10.0;
  return cfg;
}

SlotStaView pair_cost_view() {
  SlotStaView sv;
  sv.sta_id = 1;
  sv.buffer_start = 3;
  sv.arrivals = 0;
  sv.transmittable = 3;
  sv.buffer_cap = 10;
  sv.payload_bits = 12000.0;
  sv.g_backlog = 2.0;
  sv.gains = {1e-3};
  return sv;
}

}  // namespace

TEST_CASE("dpp pair cost picks the power minimizing the objective") {
  // With gain 1e-3 on a 2 MHz RU: R(0.5) = 1 and R(1.0) = 2 packets, so
  // cost(0.5) = 2*0.5 - (3+10)*1 = -12 and cost(1.0) = 2 - 26 = -24.
  const auto cfg = pair_cost_cfg();
  const auto sv = pair_cost_view();
  const auto c = dpp_pair_cost(sv, sv.gains[0], cfg.bandwidth(0), cfg);
  CHECK(c.power == 1.0);
  CHECK(c.scheduled == 2);
  CHECK(c.cost == Catch::Approx(-24.0));
}

TEST_CASE("dpp pair cost on an empty buffer falls back to the smallest power") {
  const auto cfg = pair_cost_cfg();
  auto sv = pair_cost_view();
  sv.buffer_start = 0;
  sv.transmittable = 0;
  const auto c = dpp_pair_cost(sv, sv.gains[0], cfg.bandwidth(0), cfg);
  CHECK(c.scheduled == 0);
  CHECK(c.power == 0.5);
  CHECK(c.cost == Catch::Approx(1.0));  // G * Pmin, never negative here
}

TEST_CASE("dpp pair cost is negative whenever packets move and G is zero") {
  const auto cfg = pair_cost_cfg();
  auto sv = pair_cost_view();
  sv.g_backlog = 0.0;
  const auto c = dpp_pair_cost(sv, sv.gains[0], cfg.bandwidth(0), cfg);
  CHECK(c.scheduled > 0);
  CHECK(c.cost < 0.0);
}

TEST_CASE("dpp step schedules nothing when all buffers are empty") {
  auto cfg = pair_cost_cfg();
  cfg.num_rus = 2;
  cfg.ru_bandwidth_hz = {2e6, 2e6};
  SlotObservation obs;
  obs.t = 1;
  for (int i = 0; i < 2; ++i) {
    auto sv = pair_cost_view();
    sv.sta_id = i + 1;
    sv.buffer_start = 0;
    sv.transmittable = 0;
    sv.gains = {1e-3, 10.0};
    obs.stas.push_back(sv);
  }
  const auto dec = dpp_step(obs, cfg);
  CHECK(dec.pairs.empty());
  CHECK(dec.objective == 0.0);
}

TEST_CASE("single station takes its best RU and power") {
  GlobalConfig cfg = pair_cost_cfg();
  cfg.num_rus = 4;
  cfg.ru_bandwidth_hz = {2e6, 2e6, 2e6, 2e6};
  SlotObservation obs;
  obs.t = 1;
  auto sv = pair_cost_view();
  sv.gains = {1e-3, 10.0, 0.1, 1e-4};
  obs.stas.push_back(sv);
  const auto dec = dpp_step(obs, cfg);
  REQUIRE(dec.pairs.size() == 1);
  // scan oracle over 4 RUs x 2 powers
  double best = 0;
  for (int k = 0; k < 4; ++k) {
    const auto c = dpp_pair_cost(sv, sv.gains[static_cast<std::size_t>(k)],
                                 cfg.bandwidth(k), cfg);
    best = std::min(best, c.cost);
  }
  CHECK(dec.objective == Catch::Approx(best));
  CHECK(dec.pairs[0].ru == 1);  // the gain-10 RU
}

TEST_CASE("dpp step attains the exhaustive minimum on small instances") {
  Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    GlobalConfig cfg;
    const auto obs = twtsim_test::random_observation(rng, cfg);
    const auto dec = dpp_step(obs, cfg);
    const double oracle = twtsim_test::dpp_exhaustive_min(obs, cfg);
    REQUIRE(dec.objective ==
            Catch::Approx(oracle).margin(1e-9).epsilon(1e-9));
  }
}

TEST_CASE("budget power quantizes the affordable level downward") {
  const std::vector<double> levels = {0.25, 0.5, 0.75, 1.0};
  CHECK(budget_power(3, 0.4, 0.5, 1.0, levels) == 1.0);   // budget 1.1 capped at 1
  CHECK(budget_power(4, 2.0, 0.5, 1.0, levels) == 0.0);   // spent = p_avg * t
  CHECK(budget_power(1, 0.0, 0.6, 1.0, levels) == 0.5);   // largest level <= 0.6
}

TEST_CASE("round robin rotation walks the sorted active set") {
  GlobalConfig cfg;
  cfg.num_rus = 2;
  cfg.ru_bandwidth_hz = {8e6, 8e6};
  cfg.power_levels = {0.2, 0.4, 0.6, 0.8, 1.0};
  SlotObservation obs;
  obs.t = 1;
  for (int id : {3, 5, 6}) {
    SlotStaView sv;
    sv.sta_id = id;
    sv.buffer_start = 10;
    sv.transmittable = 10;
    sv.buffer_cap = 50;
    sv.payload_bits = 12000.0;
    sv.p_avg = 1.0;
    sv.spent_energy = 0.0;
    sv.gains = {1.0, 1.0};
    obs.stas.push_back(sv);
  }
  long rotation = 0;
  auto dec = rr_step(obs, rotation, cfg);
  REQUIRE(dec.pairs.size() == 2);
  CHECK(obs.stas[static_cast<std::size_t>(dec.pairs[0].sta_index)].sta_id == 3);
  CHECK(dec.pairs[0].ru == 0);
  CHECK(obs.stas[static_cast<std::size_t>(dec.pairs[1].sta_index)].sta_id == 5);
  CHECK(dec.pairs[1].ru == 1);

  obs.t = 2;
  for (auto& sv : obs.stas) sv.spent_energy = 0.0;
  dec = rr_step(obs, rotation, cfg);
  REQUIRE(dec.pairs.size() == 2);
  CHECK(obs.stas[static_cast<std::size_t>(dec.pairs[0].sta_index)].sta_id == 5);
  CHECK(dec.pairs[0].ru == 0);
  CHECK(obs.stas[static_cast<std::size_t>(dec.pairs[1].sta_index)].sta_id == 6);
  CHECK(dec.pairs[1].ru == 1);
}

TEST_CASE("round robin rotates the RU side for a lone station") {
  GlobalConfig cfg;
  cfg.num_rus = 4;
  cfg.ru_bandwidth_hz.assign(4, 8e6);
  SlotObservation obs;
  obs.t = 1;
  SlotStaView sv;
  sv.sta_id = 1;
  sv.buffer_start = 5;
  sv.transmittable = 5;
  sv.buffer_cap = 50;
  sv.payload_bits = 12000.0;
  sv.p_avg = 1.0;
  sv.gains = {1.0, 1.0, 1.0, 1.0};
  obs.stas.push_back(sv);
  long rotation = 0;
  for (int expected_ru : {0, 1, 2, 3, 0}) {
    const auto dec = rr_step(obs, rotation, cfg);
    REQUIRE(dec.pairs.size() == 1);
    CHECK(dec.pairs[0].ru == expected_ru);
    obs.t += 1;
  }
}

TEST_CASE("round robin with no active stations is empty") {
  GlobalConfig cfg;
  SlotObservation obs;
  obs.t = 1;
  long rotation = 0;
  CHECK(rr_step(obs, rotation, cfg).pairs.empty());
}

TEST_CASE("greedy step still assigns RUs to empty stations") {
  GlobalConfig cfg;
  cfg.num_rus = 2;
  cfg.ru_bandwidth_hz = {8e6, 8e6};
  SlotObservation obs;
  obs.t = 1;
  for (int i = 0; i < 2; ++i) {
    SlotStaView sv;
    sv.sta_id = i + 1;
    sv.buffer_start = i == 0 ? 0 : 20;
    sv.transmittable = sv.buffer_start;
    sv.buffer_cap = 50;
    sv.payload_bits = 12000.0;
    sv.p_avg = 1.0;
    sv.gains = {10.0, 10.0};
    obs.stas.push_back(sv);
  }
  const auto dec = greedy_step(obs, cfg, true);
  REQUIRE(dec.pairs.size() == 2);  // the empty station still occupies an RU
  long scheduled_total = 0;
  for (const auto& pr : dec.pairs) scheduled_total += pr.scheduled_pkts;
  CHECK(scheduled_total > 0);
  for (const auto& pr : dec.pairs) {
    if (obs.stas[static_cast<std::size_t>(pr.sta_index)].sta_id == 1)
      CHECK(pr.scheduled_pkts == 0);
  }
}

TEST_CASE("buffer awareness differs exactly when the floor exceeds the queue") {
  GlobalConfig cfg;
  cfg.num_rus = 1;
  cfg.ru_bandwidth_hz = {8e6};
  SlotObservation obs;
  obs.t = 1;
  SlotStaView sv;
  sv.sta_id = 1;
  sv.buffer_start = 1;
  sv.transmittable = 1;
  sv.buffer_cap = 50;
  sv.payload_bits = 12000.0;
  sv.p_avg = 1.0;
  sv.gains = {10.0};
  obs.stas.push_back(sv);

  const auto aware = greedy_step(obs, cfg, true);
  const auto unaware = greedy_step(obs, cfg, false);
  REQUIRE(aware.pairs.size() == 1);
  REQUIRE(unaware.pairs.size() == 1);
  CHECK(aware.pairs[0].scheduled_pkts == 1);
  CHECK(unaware.pairs[0].scheduled_pkts > 1);
}
