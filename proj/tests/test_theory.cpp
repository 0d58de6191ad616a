#include <doctest.h>

#include <cmath>

#include "gramint/channel.hpp"
#include "gramint/theory.hpp"

using namespace gramint;

namespace {

// Independent Fejer evaluation as |(1/L) sum_l exp(j l phi)|^2.
double fejer_sum(int l, double phi) {
  cdouble acc = 0.0;
  for (int k = 0; k < l; ++k) acc += std::polar(1.0, k * phi);
  return std::norm(acc) / (static_cast<double>(l) * l);
}

MseParams params(int b, int l, int w, double delta, double sigma) { return {b, l, w, delta, sigma}; }

}  // namespace

TEST_SUITE("theory") {

TEST_CASE("fejer kernel values") {
  for (const int l : {1, 2, 7, 144}) {
    CHECK(fejer(l, 0.0) == 1.0);
    CHECK(fejer(l, 2.0 * kPi) == 1.0);
    if (l > 1) CHECK(fejer(l, 2.0 * kPi / l) <= 1e-28);
  }
  for (const double phi : {0.1, 1.0, 2.5, 5.0}) CHECK(fejer(1, phi) == doctest::Approx(1.0).epsilon(1e-15));
  for (const int l : {3, 16, 144})
    for (const double phi : {1e-3, 0.02, 0.3, 1.7, 4.0})
      CHECK(fejer(l, phi) == doctest::Approx(fejer_sum(l, phi)).epsilon(1e-10));
}

TEST_CASE("fejer range and monotonicity on dense grids") {
  constexpr int n = 10000;
  for (const int l : {2, 16, 144}) {
    for (int i = 0; i < n; ++i) {
      const double f = fejer(l, 2.0 * kPi * i / (n - 1));
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
    double prev = fejer(l, 0.0);
    int violations = 0;
    for (int i = 1; i < n; ++i) {
      const double f = fejer(l, 2.0 * kPi / l * i / (n - 1));
      if (!(f < prev)) ++violations;
      prev = f;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("epsilon terms") {
  const auto p = params(128, 144, 2048, 0.1, 0.05);
  CHECK(p.eps_csi() == doctest::Approx(2 * 0.0025 * (2 + 128 * 0.0025)).epsilon(1e-15));
  CHECK(p.eps_cor() == doctest::Approx(0.01 * 127).epsilon(1e-15));
  CHECK(params(1, 4, 64, 0.5, 0.0).eps_cor() == 0.0);
  CHECK(params(8, 4, 64, 0.0, 0.0).eps_csi() == 0.0);
  CHECK(params(8, 4, 64, -0.1, 0.0).eps_cor() > 0.0);
}

TEST_CASE("mse_0th closed form") {
  auto p = params(128, 144, 2048, 0.0, 0.0);
  CHECK(mse_0th(p, 500, 500) == 0.0);
  p.csi_error_std = 0.03;
  CHECK(mse_0th(p, 500, 500) == p.eps_csi());
  // 2/B (1 - f) by the independent kernel
  p.csi_error_std = 0.0;
  const double f = fejer_sum(144, 2.0 * kPi * 12 / 2048);
  CHECK(mse_0th(p, 500, 512) == doctest::Approx(2.0 / 128 * (1 - f)).epsilon(1e-10));
}

TEST_CASE("mse_0th decreases with B and scales with correlation") {
  for (const double delta : {0.0, 0.3, -0.2}) {
    double prev = 1e300;
    for (int b = 2; b <= 1024; b *= 2) {
      const double m = mse_0th(params(b, 72, 2048, delta, 0.0), 500, 512);
      CHECK(m < prev);
      prev = m;
    }
  }
  for (const double delta : {0.05, 0.1, 0.4}) {
    const auto base = mse_0th(params(64, 36, 2048, 0.0, 0.0), 500, 530);
    const auto corr = mse_0th(params(64, 36, 2048, delta, 0.0), 500, 530);
    CHECK(corr / base == doctest::Approx(1 + delta * delta * 63).epsilon(1e-13));
  }
}

TEST_CASE("mse_1st endpoints, symmetry and errors") {
  auto p = params(64, 36, 2048, 0.1, 0.0);
  CHECK(std::abs(mse_1st(p, 500, 600, 500)) <= 1e-15);
  CHECK(std::abs(mse_1st(p, 500, 600, 600)) <= 1e-15);
  p.csi_error_std = 0.04;
  CHECK(mse_1st(p, 500, 600, 500) == doctest::Approx(p.eps_csi()).epsilon(1e-12));
  CHECK(mse_1st(p, 500, 600, 512) == doctest::Approx(mse_1st(p, 500, 600, 588)).epsilon(1e-12));
  CHECK_THROWS_AS(mse_1st(p, 600, 600, 600), std::invalid_argument);
  CHECK_THROWS_AS(mse_1st(p, 500, 600, 601), std::invalid_argument);

  const auto flat = params(32, 1, 256, 0.2, 0.0);
  for (int w = 0; w <= 9; ++w) {
    CHECK(std::abs(mse_1st(flat, 0, 9, w)) <= 1e-15);
    CHECK(std::abs(mse_0th(flat, w < 5 ? 0 : 9, w)) <= 1e-15);
  }
}

TEST_CASE("large-B limit of mse_0th") {
  CHECK(mse_0th_limit(0.0, 144, 2048, 500, 512) == 0.0);
  CHECK(mse_0th_limit(0.4, 144, 2048, 512, 512) == 0.0);
  const double lim = mse_0th_limit(0.1, 144, 2048, 500, 512);
  double prev_gap = 1e300;
  for (int e = 6; e <= 14; ++e) {
    const double gap = std::abs(mse_0th(params(1 << e, 144, 2048, 0.1, 0.0), 500, 512) - lim);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
  // sigma = c / sqrt(B): eps_csi -> 0 as well
  const double c = 0.5;
  const double big = mse_0th(params(1 << 20, 144, 2048, 0.1, c / std::sqrt(1 << 20)), 500, 512);
  CHECK(std::abs(big - lim) < 1e-5);
}

TEST_CASE("max bound") {
  const auto p = params(32, 16, 256, 0.1, 0.02);
  CHECK(mse_0th_max_bound(p, 0) == doctest::Approx(p.eps_csi()).epsilon(1e-15));
  CHECK(mse_0th_max_bound(p, 16) == doctest::Approx(p.eps_csi() + p.kernel_scale()).epsilon(1e-14));
  CHECK(std::abs(mse_0th_max_bound(p, 16) - (p.eps_csi() + p.kernel_scale() * (1 - fejer(16, 2 * kPi / 16)))) < 1e-15);
  CHECK_THROWS_AS(mse_0th_max_bound(p, -1), std::invalid_argument);

  const auto active = centered_active_set(256, 200);
  for (const std::size_t count : {4, 8, 16, 31}) {
    const auto plan = BasePointPlan::uniform(active, count);
    const double bound = mse_0th_max_bound(p, plan.max_distance());
    for (const int w : active) {
      int nearest = plan.base_points().front();
      for (const int b : plan.base_points())
        if (std::abs(b - w) < std::abs(nearest - w)) nearest = b;
      CHECK(mse_0th(p, nearest, w) <= bound);
    }
  }
}

TEST_CASE("dominance condition") {
  for (int d = 1; d <= 10; ++d) CHECK(dominance_condition(d, 2048, 144) == (d <= 4));
  int violations = 0;
  for (const double sigma : {0.0, 0.05})
    for (int d = 2; d <= 10; ++d) {
      CHECK(dominance_condition(d, 256, 8));
      for (int w = 1; w < d; ++w) {
        const auto p = params(32, 8, 256, 0.1, sigma);
        if (!(mse_1st(p, 0, d, w) < mse_0th(p, w <= d - w ? 0 : d, w))) ++violations;
      }
    }
  CHECK(violations == 0);
  CHECK_FALSE(dominance_condition(11, 256, 8));
}

TEST_CASE("predict_mse covers every target") {
  const auto active = centered_active_set(256, 200);
  const auto plan = BasePointPlan::from_base_points(active, {40, 60, 100});
  const auto p = params(32, 16, 256, 0.0, 0.0);
  const auto zeroth = predict_mse(p, plan, InterpOrder::kZeroth);
  const auto first = predict_mse(p, plan, InterpOrder::kFirst);
  REQUIRE(zeroth.targets.size() == active.size() - 3);
  for (std::size_t i = 0; i < zeroth.values.size(); ++i) {
    CHECK(zeroth.values[i] >= 0.0);
    CHECK(first.values[i] >= 0.0);
    const int w = zeroth.targets[i];
    if (w < 40 || w > 100) CHECK(first.values[i] == zeroth.values[i]);
  }
}

TEST_CASE("oracle is exact at a base point") {
  const auto p = params(16, 36, 2048, 0.0, 0.0);
  OracleOptions o;
  o.trials = 200;
  const auto r = mse_oracle(p, MseGeometry{{500}, 500}, o);
  CHECK(r.order0.mean == 0.0);
  CHECK(r.order1.mean == 0.0);
}

TEST_CASE("oracle agrees with the closed forms on a small grid") {
  OracleOptions o;
  o.trials = 20000;
  for (const double delta : {0.0, 0.1}) {
    const double sigma = delta == 0.0 ? 0.0 : sigma_from_snr(db_to_linear(25.0), 16, 8);
    const auto p = params(16, 36, 2048, delta, sigma);
    o.seed = delta == 0.0 ? 5 : 6;
    const auto r = mse_oracle(p, MseGeometry{{500, 600}, 512}, o);
    CHECK(std::abs(r.order0.mean - mse_0th(p, 500, 512)) <= 4 * r.order0.std_error);
    CHECK(std::abs(r.order1.mean - mse_1st(p, 500, 600, 512)) <= 4 * r.order1.std_error);
  }
}

TEST_CASE("oracle is entry independent") {
  const auto p = params(16, 36, 2048, 0.1, 0.02);
  OracleOptions diag;
  diag.trials = 100000;
  diag.entry_row = 0;
  diag.entry_col = 0;
  diag.seed = 10;
  OracleOptions off = diag;
  off.entry_col = 1;
  off.seed = 11;
  const auto a = mse_oracle(p, MseGeometry{{500, 600}, 512}, diag);
  const auto b = mse_oracle(p, MseGeometry{{500, 600}, 512}, off);
  const double se0 = std::hypot(a.order0.std_error, b.order0.std_error);
  const double se1 = std::hypot(a.order1.std_error, b.order1.std_error);
  CHECK(std::abs(a.order0.mean - b.order0.mean) <= 3 * se0);
  CHECK(std::abs(a.order1.mean - b.order1.mean) <= 3 * se1);
}

TEST_CASE("oracle result does not depend on the thread count") {
  const auto p = params(16, 36, 2048, 0.1, 0.02);
  OracleOptions o;
  o.trials = 3000;
  o.seed = 77;
  const auto one = mse_oracle(p, MseGeometry{{500, 600}, 512}, o);
  o.threads = 4;
  const auto four = mse_oracle(p, MseGeometry{{500, 600}, 512}, o);
  CHECK(one.order0.mean == four.order0.mean);
  CHECK(one.order1.mean == four.order1.mean);
  CHECK(one.order1.std_error == four.order1.std_error);
  CHECK(mse_empirical_oracle(p, MseGeometry{{500, 600}, 512}, InterpOrder::kFirst, o).mean == one.order1.mean);
}

}
