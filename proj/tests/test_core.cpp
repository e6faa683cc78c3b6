#include <catch2/catch_amalgamated.hpp>

#include "twtsim/core.hpp"
#include "twtsim/rng.hpp"

using namespace twtsim;

TEST_CASE("is_active matches the service-period window") {
  const TwtTriplet tw{2, 30, 7};
  CHECK(is_active(tw, 2));        // first SP block
  CHECK(is_active(tw, 8));        // last block of the 7-block SP
  CHECK_FALSE(is_active(tw, 9));  // first SP ended
  CHECK(is_active(tw, 32));       // second SP starts at 2 + 30
  CHECK_FALSE(is_active(tw, 1));  // before the offset
}

TEST_CASE("is_active covers exactly sp_blocks per wake interval") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    TwtTriplet tw;
    tw.wake_interval_blocks = 1 + static_cast<Block>(rng.uniform_index(40));
    tw.sp_blocks = 1 + static_cast<Block>(rng.uniform_index(
                           static_cast<std::size_t>(tw.wake_interval_blocks)));
    tw.offset_blocks = static_cast<Block>(rng.uniform_index(50));
    const Block n = static_cast<Block>(rng.uniform_index(5));
    Block active = 0;
    const Block start = tw.offset_blocks + n * tw.wake_interval_blocks;
    for (Block t = start; t < start + tw.wake_interval_blocks; ++t)
      if (t >= 1 && is_active(tw, t)) ++active;
    // Windows that start before block 1 lose the clipped part.
    const Block clipped = std::max<Block>(0, std::min(tw.sp_blocks, 1 - start));
    CHECK(active == tw.sp_blocks - clipped);
  }
}

TEST_CASE("validate_partition reports duplicates and gaps") {
  GroupAssignment ga;
  ga.triplets = {TwtTriplet{0, 2, 1}, TwtTriplet{1, 2, 1}};

  SECTION("valid partition") {
    ga.groups = {{1, 2}, {3}};
    const auto rep = validate_partition(ga, 3);
    CHECK(rep.ok);
    CHECK(rep.message() == "ok");
  }
  SECTION("duplicated station") {
    ga.groups = {{1}, {1, 2}};
    const auto rep = validate_partition(ga, 2);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.duplicated == std::vector<int>{1});
    CHECK(rep.missing.empty());
  }
  SECTION("missing station, empty group allowed") {
    ga.groups = {{1}, {}};
    const auto rep = validate_partition(ga, 2);
    CHECK_FALSE(rep.ok);
    CHECK(rep.duplicated.empty());
    REQUIRE(rep.missing == std::vector<int>{2});
  }
}

TEST_CASE("partition sizes add up when valid") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform_index(12));
    const std::size_t l = 1 + rng.uniform_index(4);
    GroupAssignment ga;
    ga.groups.assign(l, {});
    ga.triplets.assign(l, TwtTriplet{0, 1, 1});
    for (int id = 1; id <= m; ++id)
      ga.groups[rng.uniform_index(l)].push_back(id);
    REQUIRE(validate_partition(ga, m).ok);
    std::size_t total = 0;
    for (const auto& g : ga.groups) total += g.size();
    CHECK(total == static_cast<std::size_t>(m));
  }
}

TEST_CASE("table-2 style triplets do not overlap") {
  const std::vector<TwtTriplet> tws = {{2, 30, 7}, {16, 150, 2}, {10, 90, 5}};
  CHECK_FALSE(find_sp_overlap(tws).has_value());
}

TEST_CASE("overlapping service periods are detected") {
  const std::vector<TwtTriplet> tws = {{2, 30, 7}, {5, 60, 3}};
  const auto ov = find_sp_overlap(tws);
  REQUIRE(ov.has_value());
  CHECK(ov->group_a == 0);
  CHECK(ov->group_b == 1);
  CHECK(is_active(tws[0], ov->block));
  CHECK(is_active(tws[1], ov->block));
}
