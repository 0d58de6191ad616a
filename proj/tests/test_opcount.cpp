#include <doctest.h>

#include "gramint/channel.hpp"
#include "gramint/opcount.hpp"

using namespace gramint;

TEST_SUITE("opcount") {

TEST_CASE("reference values") {
  CHECK(cost_bf(1200, 128, 8) == 19'660'800);
  CHECK(cost_bf(37, 11, 1) == 2 * 37 * 11);
  // per subcarrier: 4B per off-diagonal entry, 2B per diagonal entry
  for (const std::uint64_t u : {1, 2, 5, 8}) CHECK(cost_bf(1, 9, u) == 4 * 9 * u * (u - 1) / 2 + 2 * 9 * u);
  // evaluated from the displayed polynomial: 2*287*1041*64 + 2*287*913*8
  CHECK(cost_exact(1200, 287, 128, 8) == 42'434'672);
  CHECK(cost_0th(300, 128, 8) == 4'915'200);
  CHECK(cost_1st(1200, 300, 128, 8) == 5'044'800);
}

TEST_CASE("boundaries and ratio identities") {
  for (const std::uint64_t active : {50, 200, 1200})
    for (const std::uint64_t b : {4, 32, 128})
      for (const std::uint64_t u : {1, 4, 8}) {
        const auto bf = cost_bf(active, b, u);
        CHECK(cost_exact(active, active, b, u) == bf);
        CHECK(cost_0th(active, b, u) == bf);
        CHECK(cost_1st(active, active, b, u) == bf);
        for (std::uint64_t p = 1; p < active; p += 7) {
          CHECK(cost_0th(p, b, u) * active == bf * p);
          CHECK(cost_1st(active, p, b, u) - cost_0th(p, b, u) == 2 * (active - p) * u * (u + 1));
          CHECK(cost_1st(active, p, b, u) > cost_0th(p, b, u));
          CHECK(cost_0th(p + 1, b, u) > cost_0th(p, b, u));
        }
      }
  CHECK_THROWS_AS(cost_exact(10, 11, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(cost_1st(10, 11, 4, 2), std::invalid_argument);
}

TEST_CASE("exact break-even") {
  const auto bf = cost_bf(1200, 128, 8);
  std::uint64_t first = 0;
  for (std::uint64_t p = 1; p <= 1200; ++p) {
    const bool cheaper = cost_exact(1200, p, 128, 8) < bf;
    CHECK(cheaper == (p * 9 < 1024));  // |P| < BU/(1+U)
    if (!cheaper && first == 0) first = p;
  }
  CHECK(first == (1024 + 8) / 9);  // ceil(1024/9) = 114
}

TEST_CASE("instrumented counters equal the formulas") {
  Rng rng(3, StreamId::kUnitTest, 0);
  for (int k = 0; k < 12; ++k) {
    SystemConfig c;
    c.fft_size = 256;
    c.delay_spread = 8;
    c.num_bs_antennas = 1 + static_cast<int>(rng.bits64() % 24);
    c.num_users = 1 + static_cast<int>(rng.bits64() % 5);
    const int n = 20 + static_cast<int>(rng.bits64() % 150);
    c.active_set = centered_active_set(256, n);
    const auto count = 1 + rng.bits64() % static_cast<std::uint64_t>(n);
    const auto plan = BasePointPlan::uniform(c.active_set, count);
    const auto fd = td_to_fd(gen_td_channel(c, rng), c);
    const auto b = static_cast<std::uint64_t>(c.num_bs_antennas), u = static_cast<std::uint64_t>(c.num_users);
    CHECK(instrumented_count(GramMethod::kBruteForce, fd, plan, 8, 256) == cost_bf(n, b, u));
    CHECK(instrumented_count(GramMethod::kExact, fd, plan, 8, 256) == cost_exact(n, count, b, u));
    CHECK(instrumented_count(GramMethod::kOrder0, fd, plan, 8, 256) == cost_0th(count, b, u));
    CHECK(instrumented_count(GramMethod::kOrder1, fd, plan, 8, 256) ==
          cost_1st_with_edges(n, count, plan.edge_target_count(), b, u));
  }
}

TEST_CASE("order1 edge targets are copies") {
  SystemConfig c;
  c.num_bs_antennas = 6;
  c.num_users = 3;
  c.fft_size = 64;
  c.delay_spread = 4;
  c.active_set = centered_active_set(64, 30);
  Rng rng(5);
  const auto fd = td_to_fd(gen_td_channel(c, rng), c);
  const auto plan = BasePointPlan::from_base_points(c.active_set, {c.active_set[5], c.active_set[20]});
  REQUIRE(plan.edge_target_count() == 14);
  const auto measured = instrumented_count(GramMethod::kOrder1, fd, plan, 4, 64);
  CHECK(measured == cost_1st(30, 2, 6, 3) - 2 * 14 * 3 * 4);
  CHECK(measured == analytical_cost(GramMethod::kOrder1, plan, 6, 3));
}

TEST_CASE("complexity report at the reference scale") {
  const auto active = centered_active_set(2048, 1200);
  const auto bf_total = cost_bf(1200, 128, 8) + cost_matched_filter(1200, 128, 8) + cost_inversion(1200, 8);
  for (const std::size_t p : {300, 600, 900, 1200}) {
    const auto plan = BasePointPlan::uniform(active, p);
    const auto r0 = complexity_report(GramMethod::kOrder0, plan, 128, 8);
    CHECK(r0.ratio_vs_bf == doctest::Approx(p / 1200.0).epsilon(1e-15));
    if (p == 300) {
      CHECK(2 * r0.detection_total < bf_total);
      CHECK(2 * complexity_report(GramMethod::kOrder1, plan, 128, 8).detection_total < bf_total);
    }
    if (p == 1200)
      for (const auto m : {GramMethod::kBruteForce, GramMethod::kExact, GramMethod::kOrder0, GramMethod::kOrder1})
        CHECK(complexity_report(m, plan, 128, 8).analytical == 19'660'800);
  }
  CHECK(cost_matched_filter(1200, 128, 8) == 4ULL * 1200 * 128 * 8);
  CHECK(cost_inversion(1200, 8) == 4ULL * 1200 * 512);
}

}
