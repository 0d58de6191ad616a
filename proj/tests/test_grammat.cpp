#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gramint/channel.hpp"
#include "gramint/grammat.hpp"

using namespace gramint;

namespace {

std::vector<int> range(int first, int count) {
  std::vector<int> v(count);
  std::iota(v.begin(), v.end(), first);
  return v;
}

SystemConfig cfg(int b, int u, int w, int l, std::vector<int> active) {
  SystemConfig c;
  c.num_bs_antennas = b;
  c.num_users = u;
  c.fft_size = w;
  c.delay_spread = l;
  c.active_set = std::move(active);
  return c;
}

FdChannel random_fd(const SystemConfig& c, std::uint64_t seed) {
  Rng rng(seed, StreamId::kUnitTest, 0);
  return td_to_fd(gen_td_channel(c, rng), c);
}

double hermitian_defect(const CMatrix& g) { return (g - g.adjoint()).cwiseAbs().maxCoeff(); }

double rel_frob(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_SUITE("grammat") {

TEST_CASE("method names round-trip") {
  for (const auto m : {GramMethod::kBruteForce, GramMethod::kExact, GramMethod::kOrder0, GramMethod::kOrder1})
    CHECK(parse_gram_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_gram_method("order2"), std::invalid_argument);
}

TEST_CASE("uniform plan geometry") {
  const auto all = BasePointPlan::uniform(range(0, 10), 10);
  CHECK(all.base_points() == range(0, 10));
  CHECK(all.targets().empty());

  const auto two = BasePointPlan::uniform(range(0, 11), 2);
  CHECK(two.base_points() == std::vector<int>{0, 10});
  const auto& t5 = two.targets()[4];
  REQUIRE(two.active_set()[t5.position] == 5);
  CHECK(t5.lambda == 0.5);
  CHECK(t5.bracketed);
  CHECK(two.active_set()[t5.nearest] == 0);
  CHECK(two.spacings() == std::vector<int>{10});
  CHECK(two.max_distance() == 5);

  CHECK_THROWS_AS(BasePointPlan::uniform(range(0, 5), 6), std::invalid_argument);
  CHECK_THROWS_AS(BasePointPlan::uniform(range(0, 5), 0), std::invalid_argument);
}

TEST_CASE("d_max matches an exhaustive nearest-distance scan") {
  const auto active = centered_active_set(2048, 1200);
  for (const std::size_t count : {2, 36, 287, 576, 1199}) {
    const auto plan = BasePointPlan::uniform(active, count);
    const auto& p = plan.base_points();
    CHECK(p.front() == active.front());
    CHECK(p.back() == active.back());
    int worst = 0;
    for (const int w : active) {
      int best = 1 << 30;
      for (const int b : p) best = std::min(best, std::abs(w - b));
      worst = std::max(worst, best);
    }
    CHECK(plan.max_distance() == worst);
    for (const auto& t : plan.targets()) {
      if (!t.bracketed) continue;
      const int w = active[t.position], lo = active[t.lower], hi = active[t.upper];
      CHECK(t.lambda == doctest::Approx(static_cast<double>(hi - w) / (hi - lo)).epsilon(1e-15));
      CHECK(t.lambda >= 0.0);
      CHECK(t.lambda <= 1.0);
    }
  }
}

TEST_CASE("explicit base points and edge targets") {
  const auto plan = BasePointPlan::from_base_points(range(0, 12), {3, 7});
  CHECK(plan.edge_target_count() == 7);  // 0,1,2 and 8..11
  for (const auto& t : plan.targets()) {
    const int w = plan.active_set()[t.position];
    if (w < 3 || w > 7) {
      CHECK_FALSE(t.bracketed);
      CHECK(t.lower == t.upper);
      CHECK(plan.active_set()[t.nearest] == (w < 3 ? 3 : 7));
    }
  }
  CHECK_THROWS_AS(BasePointPlan::from_base_points(range(0, 12), {3, 40}), std::invalid_argument);
  CHECK_THROWS_AS(BasePointPlan::from_base_points(range(0, 12), {7, 3}), std::invalid_argument);
}

TEST_CASE("brute force against a naive triple loop") {
  const auto c = cfg(4, 2, 64, 3, range(10, 5));
  const auto fd = random_fd(c, 1);
  OpCounter ops;
  const auto g = gram_brute_force(fd, &ops);
  CHECK(g.method == GramMethod::kBruteForce);
  CHECK(ops.real_mults == 2ULL * 5 * 4 * 2 * 2);
  for (std::size_t w = 0; w < fd.size(); ++w) {
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n) {
        cdouble acc = 0.0;
        for (int b = 0; b < 4; ++b) acc += std::conj(fd.h[w](b, m)) * fd.h[w](b, n);
        CHECK(std::abs(g.grams[w](m, n) - acc) <= 1e-12);
      }
    CHECK(hermitian_defect(g.grams[w]) <= 1e-12);
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(g.grams[w]);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("orthonormal columns give the identity") {
  FdChannel fd;
  fd.subcarriers = {0};
  const Eigen::HouseholderQR<CMatrix> qr(CMatrix::Random(6, 3));
  fd.h = {qr.householderQ() * CMatrix::Identity(6, 3)};
  const auto g = gram_brute_force(fd);
  CHECK((g.grams[0] - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("DFT submatrix") {
  const auto all = range(0, 16);
  const CMatrix dc = build_dft_submatrix(all, 1, 16);
  REQUIRE(dc.cols() == 1);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(dc(i, 0) - cdouble(0.25, 0.0)) <= 1e-15);

  const CMatrix f = build_dft_submatrix(all, 5, 16);
  REQUIRE(f.cols() == 9);
  CHECK((f.adjoint() * f - CMatrix::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-12);

  const std::vector<int> rows{0, 2, 5};
  const CMatrix g = build_dft_submatrix(rows, 2, 8);
  const int cols[] = {0, 1, 7};
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) {
      const double ang = -2.0 * kPi * rows[r] * cols[k] / 8.0;
      CHECK(std::abs(g(r, k) - std::polar(1.0 / std::sqrt(8.0), ang)) <= 1e-15);
    }
  CHECK_THROWS_AS(build_dft_submatrix(rows, 5, 8), std::invalid_argument);
}

TEST_CASE("exact interpolation reproduces brute force under perfect CSI") {
  const auto c = cfg(32, 4, 256, 16, centered_active_set(256, 200));
  const auto fd = random_fd(c, 2);
  const auto bf = gram_brute_force(fd);
  for (const std::size_t count : {31, 40, 64}) {
    const auto plan = BasePointPlan::uniform(c.active_set, count);
    const ExactInterpolator op(plan, 16, 256);
    CHECK_FALSE(op.underdetermined());
    const auto g = op.apply(fd);
    CHECK(g.method == GramMethod::kExact);
    for (std::size_t w = 0; w < g.size(); ++w) {
      CHECK(rel_frob(g.grams[w], bf.grams[w]) <= 1e-9);
      CHECK(hermitian_defect(g.grams[w]) <= 1e-12);
    }
  }
}

TEST_CASE("exact interpolation with a single tap and a single base point") {
  const auto c = cfg(8, 3, 64, 1, range(5, 20));
  const auto fd = random_fd(c, 3);
  const auto plan = BasePointPlan::uniform(c.active_set, 1);
  const auto g = gram_exact_interp(fd, plan, 1, 64);
  const CMatrix base = gram_brute_force(fd).grams[plan.base_positions()[0]];
  for (const auto& m : g.grams) CHECK((m - base).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exact interpolation error grows with CSI noise") {
  const auto c = cfg(32, 4, 256, 16, centered_active_set(256, 200));
  const auto plan = BasePointPlan::uniform(c.active_set, 31);
  const ExactInterpolator op(plan, 16, 256);
  Rng rng(4, StreamId::kUnitTest, 1);
  const auto clean = td_to_fd(gen_td_channel(c, rng), c);
  double prev = -1.0;
  for (const double sigma : {0.0, 0.01, 0.1}) {
    Rng noise(4, StreamId::kUnitTest, 2);
    const auto fd = sigma > 0 ? perturb_csi(clean, sigma, noise) : clean;
    const auto bf = gram_brute_force(fd);
    const auto g = op.apply(fd);
    double worst = 0.0;
    for (std::size_t w = 0; w < g.size(); ++w) worst = std::max(worst, rel_frob(g.grams[w], bf.grams[w]));
    CHECK(worst > prev);
    prev = worst;
  }
}

TEST_CASE("rank deficiency is reported") {
  const auto active = centered_active_set(2048, 1200);
  const auto plan = BasePointPlan::uniform(active, 287);
  const ExactInterpolator op(plan, 144, 2048);
  CHECK(op.truncated());
  CHECK(op.rank() < 287);
  CHECK(op.condition_number() > 1e10);
  CHECK(op.diagnostic().find("truncated") != std::string::npos);
  ExactInterpOptions strict;
  strict.reject_rank_deficient = true;
  CHECK_THROWS_AS(ExactInterpolator(plan, 144, 2048, strict), RankDeficiencyError);

  const auto small = BasePointPlan::uniform(centered_active_set(256, 200), 8);
  CHECK(ExactInterpolator(small, 16, 256).underdetermined());
}

TEST_CASE("0th order copies the nearest base point") {
  auto c = cfg(16, 3, 2048, 36, range(495, 110));
  const auto fd = random_fd(c, 5);
  const auto bf = gram_brute_force(fd);
  const auto plan = BasePointPlan::from_base_points(c.active_set, {500, 600});
  const auto g = gram_interp_0th(fd, plan);
  auto at = [&](int w) { return static_cast<std::size_t>(w - 495); };
  CHECK(g.grams[at(512)] == bf.grams[at(500)]);
  CHECK(g.grams[at(550)] == bf.grams[at(500)]);  // tie goes to the lower base point
  CHECK(g.grams[at(551)] == bf.grams[at(600)]);
  CHECK(g.grams[at(500)] == bf.grams[at(500)]);
  CHECK(g.grams[at(600)] == bf.grams[at(600)]);
  for (const auto& m : g.grams) CHECK(hermitian_defect(m) <= 1e-12);

  const auto flat = cfg(6, 2, 64, 1, range(0, 30));
  const auto ffd = random_fd(flat, 6);
  const auto fbf = gram_brute_force(ffd);
  const auto fg = gram_interp_0th(ffd, BasePointPlan::uniform(flat.active_set, 3));
  for (std::size_t w = 0; w < fg.size(); ++w) CHECK((fg.grams[w] - fbf.grams[w]).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("1st order interpolates on the segment") {
  const auto c = cfg(8, 3, 256, 8, range(100, 21));
  const auto fd = random_fd(c, 7);
  const auto bf = gram_brute_force(fd);
  const auto plan = BasePointPlan::from_base_points(c.active_set, {100, 110, 120});
  const auto g = gram_interp_1st(fd, plan);
  CHECK(g.grams[0] == bf.grams[0]);
  CHECK((g.grams[5] - 0.5 * (bf.grams[0] + bf.grams[10])).cwiseAbs().maxCoeff() <= 1e-14);
  const double lam = 0.7;  // w = 113
  CHECK((g.grams[13] - (lam * bf.grams[10] + (1 - lam) * bf.grams[20])).cwiseAbs().maxCoeff() <= 1e-13);
  for (const auto& m : g.grams) CHECK(hermitian_defect(m) <= 1e-12);

  // identical base channels
  FdChannel same = fd;
  same.h[20] = same.h[10];
  const auto gs = gram_interp_1st(same, plan);
  const CMatrix common = gram_brute_force(same).grams[10];
  for (int i = 11; i < 20; ++i) CHECK((gs.grams[i] - common).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("all methods agree on base points") {
  const auto c = cfg(16, 4, 256, 16, centered_active_set(256, 200));
  const auto fd = random_fd(c, 8);
  const auto plan = BasePointPlan::uniform(c.active_set, 40);
  const ExactInterpolator op(plan, 16, 256);
  const auto bf = gram_brute_force(fd);
  const auto sets = {op.apply(fd), gram_interp_0th(fd, plan), gram_interp_1st(fd, plan)};
  for (const auto& s : sets)
    for (const auto pos : plan.base_positions()) CHECK(s.grams[pos] == bf.grams[pos]);

  // derive_grams reproduces the kernels
  for (const auto m : {GramMethod::kExact, GramMethod::kOrder0, GramMethod::kOrder1}) {
    const auto direct = compute_grams(m, fd, plan, &op);
    const auto derived = derive_grams(m, bf, plan, &op);
    for (std::size_t w = 0; w < direct.size(); ++w)
      CHECK((direct.grams[w] - derived.grams[w]).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("misaligned channel is rejected") {
  const auto c = cfg(4, 2, 64, 2, range(0, 10));
  const auto fd = random_fd(c, 9);
  const auto plan = BasePointPlan::uniform(range(1, 10), 3);
  CHECK_THROWS_AS(gram_interp_0th(fd, plan), std::invalid_argument);
}

}
