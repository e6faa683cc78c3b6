#include <catch2/catch_amalgamated.hpp>

#include "scenarios.hpp"
#include "twtsim/json_io.hpp"
#include "twtsim/sim.hpp"

using namespace twtsim;
using twtsim_test::tables12_scenario;

namespace {

GroupAssignment tables12_groups(const Scenario& sc) {
  return rr_grouping(static_cast<int>(sc.stas.size()), sc.grouping.triplets);
}

}  // namespace

TEST_CASE("same seed gives byte-identical metrics") {
  const auto sc = tables12_scenario();
  const auto ga = tables12_groups(sc);
  for (RaRoutine ra : {RaRoutine::dpp, RaRoutine::rr, RaRoutine::greedy, RaRoutine::gbu}) {
    const auto a = run_episode(sc.global, sc.stas, ga, ra, 2000, 7);
    const auto b = run_episode(sc.global, sc.stas, ga, ra, 2000, 7);
    REQUIRE(metrics_to_csv({a}) == metrics_to_csv({b}));
    const auto c = run_episode(sc.global, sc.stas, ga, ra, 2000, 8);
    CHECK(metrics_to_csv({a}) != metrics_to_csv({c}));
  }
}

TEST_CASE("zero-traffic stations produce all-zero metrics") {
  auto sc = tables12_scenario();
  for (auto& s : sc.stas) s.traffic = BernoulliTraffic{10, 0.0};
  const auto ga = tables12_groups(sc);
  for (RaRoutine ra : {RaRoutine::dpp, RaRoutine::rr, RaRoutine::greedy, RaRoutine::gbu}) {
    const auto em = run_episode(sc.global, sc.stas, ga, ra, 3000, 1);
    CHECK(em.system_timely_throughput == 0.0);
    for (const auto& sm : em.stas) {
      CHECK(sm.transmitted == 0);
      CHECK(sm.admitted == 0);
      CHECK(sm.avg_power_w == 0.0);
      CHECK(sm.discarded_overflow == 0);
      CHECK(sm.discarded_expiry == 0);
    }
  }
}

TEST_CASE("always-active saturable station delivers its arrival rate") {
  Scenario sc;
  sc.global.num_rus = 1;
  sc.global.ru_bandwidth_hz = {2e7};
  sc.global.gain_set = {10.0};
  sc.global.power_levels = {1.0};
  sc.global.v_param = 1e4;
  StaProfile s = twtsim_test::bernoulli_sta(1, 1.0);
  sc.stas = {s};
  GroupAssignment ga;
  ga.groups = {{1}};
  ga.triplets = {{1, 1, 1}};
  const auto em = run_episode(sc.global, sc.stas, ga, RaRoutine::dpp, 100000, 3);
  CHECK(em.stas[0].timely_throughput == Catch::Approx(7.0).margin(0.1));
  CHECK(em.stas[0].discarded_overflow == 0);
  CHECK(em.stas[0].discarded_expiry == 0);
}

TEST_CASE("transmissions and power stay inside service periods") {
  const auto sc = tables12_scenario();
  const auto ga = tables12_groups(sc);
  std::vector<std::size_t> group_of(sc.stas.size());
  for (std::size_t l = 0; l < ga.groups.size(); ++l)
    for (int id : ga.groups[l]) group_of[static_cast<std::size_t>(id - 1)] = l;

  for (RaRoutine ra : {RaRoutine::dpp, RaRoutine::rr, RaRoutine::greedy, RaRoutine::gbu}) {
    long checked = 0;
    RunOptions opts;
    opts.observer = [&](const BlockTrace& tr) {
      for (const auto& st : tr.stas) {
        const auto& tw = ga.triplets[group_of[static_cast<std::size_t>(st.id - 1)]];
        if (st.transmitted > 0 || st.power > 0) {
          REQUIRE(is_active(tw, tr.t));
          ++checked;
        }
        REQUIRE(st.power <= sc.global.p_max + 1e-12);
        REQUIRE(st.buffer_end <= 50);
        // Buffer evolution arithmetic for the realized quantities.
        REQUIRE(st.buffer_end ==
                std::max<long>(st.buffer_start + st.arrivals - st.transmitted -
                                   st.overflow_discards - st.expiry_discards,
                               0));
      }
    };
    const auto em = run_episode(sc.global, sc.stas, ga, ra, 3000, 5, opts);
    CHECK(checked > 0);
    CHECK_FALSE(em.violations.any());
    for (const auto& sm : em.stas) {
      CHECK(sm.admitted ==
            sm.transmitted + sm.discarded_overflow + sm.discarded_expiry +
                sm.final_buffer);
    }
  }
}

TEST_CASE("per-block drift stays under the quadratic bound") {
  const auto sc = tables12_scenario();
  const auto ga = tables12_groups(sc);
  for (RaRoutine ra : {RaRoutine::dpp, RaRoutine::rr, RaRoutine::greedy, RaRoutine::gbu}) {
    RunOptions opts;
    opts.observer = [&](const BlockTrace& tr) {
      double lhs = 0, rhs = 0;
      for (const auto& st : tr.stas) {
        const double b0 = static_cast<double>(st.buffer_start);
        const double b1 = static_cast<double>(st.buffer_end);
        lhs += 0.5 * (b1 * b1 - b0 * b0 + st.g_end * st.g_end - st.g_start * st.g_start);
        const double a = static_cast<double>(st.arrivals);
        const double rd = static_cast<double>(st.transmitted + st.overflow_discards +
                                              st.expiry_discards);
        const double p_avg = 0.5;
        rhs += 0.5 * (p_avg * p_avg + st.power * st.power + a * a + rd * rd) +
               st.g_start * (st.power - p_avg) + b0 * (a - rd);
      }
      REQUIRE(lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs)));
    };
    run_episode(sc.global, sc.stas, ga, ra, 1500, 11, opts);
  }
}

TEST_CASE("virtual queues drain while a station sleeps") {
  const auto sc = tables12_scenario();
  const auto ga = tables12_groups(sc);
  bool saw_positive = false;
  double last_g = 0;
  RunOptions opts;
  opts.observer = [&](const BlockTrace& tr) {
    const auto& st = tr.stas[0];  // station 1, group 1
    if (st.power == 0.0 && st.g_start > 0) {
      REQUIRE(st.g_end == Catch::Approx(std::max(st.g_start - 0.5, 0.0)));
      saw_positive = true;
    }
    last_g = st.g_end;
  };
  run_episode(sc.global, sc.stas, ga, RaRoutine::dpp, 2000, 2, opts);
  CHECK(saw_positive);
  CHECK(last_g >= 0);
}

TEST_CASE("overlapping service periods are a configuration error") {
  const auto sc = tables12_scenario();
  GroupAssignment ga;
  ga.groups = {{1, 2, 3, 4}, {5, 6, 7, 8}};
  ga.triplets = {{2, 30, 7}, {5, 60, 3}};
  CHECK_THROWS_AS(run_episode(sc.global, sc.stas, ga, RaRoutine::dpp, 100, 1),
                  ConfigError);
}

TEST_CASE("invalid partitions are rejected") {
  const auto sc = tables12_scenario();
  GroupAssignment ga;
  ga.groups = {{1, 2, 3}, {3, 4, 5}, {6, 7, 8}};  // station 3 duplicated
  ga.triplets = twtsim_test::table2_triplets();
  CHECK_THROWS_AS(run_episode(sc.global, sc.stas, ga, RaRoutine::dpp, 100, 1),
                  ConfigError);
}

TEST_CASE("weighted system throughput is the exact weighted sum") {
  auto sc = tables12_scenario();
  for (std::size_t i = 0; i < sc.stas.size(); ++i)
    sc.stas[i].weight = 0.5 + static_cast<double>(i) * 0.25;
  const auto ga = tables12_groups(sc);
  const auto em = run_episode(sc.global, sc.stas, ga, RaRoutine::greedy, 2000, 3);
  double expect = 0;
  for (const auto& sm : em.stas) expect += sm.weight * sm.timely_throughput;
  CHECK(em.system_timely_throughput == expect);
  for (const auto& sm : em.stas) CHECK(sm.avg_power_w <= sc.global.p_max);
}
