#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gramint/channel.hpp"
#include "gramint/grammat.hpp"
#include "gramint/opcount.hpp"
#include "gramint/rng.hpp"
#include "gramint/sim/experiments.hpp"
#include "gramint/theory.hpp"

namespace gramint::sim {

namespace {

struct Check {
  std::string property;
  bool passed;
  double measured;
  double threshold;
  std::string detail;
};

Rng validate_rng(const ExperimentConfig& c, std::uint64_t index) {
  return Rng(c.seed, StreamId::kValidate, index);
}

double max_relative_frobenius(const GramSet& a, const GramSet& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, (a.grams[i] - b.grams[i]).norm() / b.grams[i].norm());
  return worst;
}

Check exactness(const ExperimentConfig& c, std::size_t count, std::uint64_t stream) {
  const SystemConfig sys = c.scenario.system();
  Rng rng = validate_rng(c, stream);
  const FdChannel fd = td_to_fd(gen_td_channel(sys, rng), sys);
  const auto plan = BasePointPlan::uniform(sys.active_set, count);
  const double err = max_relative_frobenius(
      gram_exact_interp(fd, plan, sys.delay_spread, sys.fft_size), gram_brute_force(fd));
  constexpr double kTol = 1e-9;
  return {"exact_interp_matches_bf_P" + std::to_string(count), err <= kTol, err, kTol,
          "perfect CSI, max relative Frobenius error over targets"};
}

std::vector<Check> kernel_checks() {
  std::vector<Check> out;
  constexpr int kGrid = 10000;
  double worst_range = 0.0;
  bool in_range = true;
  for (const int l : {2, 16, 144}) {
    for (int i = 0; i < kGrid; ++i) {
      const double f = fejer(l, 2.0 * kPi * i / (kGrid - 1));
      if (f < 0.0 || f > 1.0) in_range = false;
      worst_range = std::max({worst_range, f - 1.0, -f});
    }
  }
  out.push_back({"fejer_in_unit_interval", in_range, worst_range, 0.0,
                 "L in {2,16,144}, 1e4 points on [0,2pi]; measured = max excursion outside [0,1]"});

  int violations = 0;
  for (const int l : {2, 16, 144}) {
    double prev = fejer(l, 0.0);
    for (int i = 1; i < kGrid; ++i) {
      const double f = fejer(l, 2.0 * kPi / l * i / (kGrid - 1));
      if (!(f < prev)) ++violations;
      prev = f;
    }
  }
  out.push_back({"fejer_strictly_decreasing", violations == 0, static_cast<double>(violations), 0.0,
                 "L in {2,16,144}, 1e4 points on [0,2pi/L]"});
  return out;
}

std::vector<Check> oracle_checks(const ExperimentConfig& c, unsigned threads) {
  const auto& s = c.scenario;
  const SystemConfig sys = s.system();
  const auto& active = sys.active_set;
  const std::size_t mid = active.size() / 2;
  const std::size_t half = std::min<std::size_t>(6, mid);
  const int lo = active[mid - half];
  const int hi = active[std::min(mid + half, active.size() - 1)];
  const int target = lo + (hi - lo) / 4;

  std::vector<Check> out;
  std::uint64_t row = 0;
  for (const bool ideal : {true, false}) {
    MseParams p;
    p.num_bs_antennas = s.bs_antennas;
    p.delay_spread = s.delay_spread;
    p.fft_size = s.fft_size;
    p.correlation = ideal ? 0.0 : c.mse.nonideal_correlation;
    p.csi_error_std = ideal ? 0.0 : sigma_from_snr(db_to_linear(c.mse.csi_snr_db), s.bs_antennas, s.users);
    OracleOptions o;
    o.trials = c.validate.oracle_trials;
    o.seed = stream_seed(c.seed, static_cast<std::uint64_t>(StreamId::kValidate), 1000 + row++);
    o.entry_row = c.mse.entry_row;
    o.entry_col = c.mse.entry_col;
    o.threads = threads;
    const auto emp = mse_oracle(p, MseGeometry{{lo, hi}, target}, o);
    const double th0 = mse_0th(p, target - lo <= hi - target ? lo : hi, target);
    const double th1 = mse_1st(p, lo, hi, target);
    const std::string tag = ideal ? "ideal" : "nonideal";
    std::ostringstream geo;
    geo << "p=" << lo << "," << hi << " w=" << target << " trials=" << o.trials
        << "; measured = |emp-theory|/stderr";
    const double z0 = std::abs(emp.order0.mean - th0) / emp.order0.std_error;
    const double z1 = std::abs(emp.order1.mean - th1) / emp.order1.std_error;
    out.push_back({"oracle_agrees_mse0_" + tag, z0 <= c.validate.oracle_sigmas, z0,
                   c.validate.oracle_sigmas, geo.str()});
    out.push_back({"oracle_agrees_mse1_" + tag, z1 <= c.validate.oracle_sigmas, z1,
                   c.validate.oracle_sigmas, geo.str()});
  }
  return out;
}

Check max_bound(const ExperimentConfig& c) {
  const auto& s = c.scenario;
  const SystemConfig sys = s.system();
  int violations = 0;
  double worst = -1e300;
  for (const std::size_t count : {4, 8, 16, 31}) {
    if (count > sys.active_set.size()) continue;
    const auto plan = BasePointPlan::uniform(sys.active_set, count);
    for (const double delta : {0.0, 0.1})
      for (const double sigma : {0.0, 0.02}) {
        MseParams p{s.bs_antennas, s.delay_spread, s.fft_size, delta, sigma};
        const double bound = mse_0th_max_bound(p, plan.max_distance());
        const auto pred = predict_mse(p, plan, InterpOrder::kZeroth);
        const double mx = *std::max_element(pred.values.begin(), pred.values.end());
        worst = std::max(worst, mx - bound);
        if (mx > bound) ++violations;
      }
  }
  return {"mse0_max_bound", violations == 0, worst, 0.0,
          "|P| in {4,8,16,31}, all targets; measured = max(max mse0 - bound)"};
}

std::vector<Check> dominance(const ExperimentConfig& c) {
  const int w = c.scenario.fft_size;
  constexpr int kDelay = 8;
  const int dmax = w / (3 * kDelay);
  int violations = 0;
  std::size_t cases = 0;
  for (const int b : {8, 32, 128})
    for (const double delta : {0.0, 0.1})
      for (const double sigma : {0.0, 0.05})
        for (int d = 2; d <= dmax; ++d)
          for (int off = 1; off < d; ++off) {
            MseParams p{b, kDelay, w, delta, sigma};
            const double m1 = mse_1st(p, 0, d, off);
            const double m0 = mse_0th(p, off <= d - off ? 0 : d, off);
            ++cases;
            if (!(m1 < m0)) ++violations;
          }
  std::vector<Check> out;
  out.push_back({"mse1_below_mse0_when_3Ld_le_W", violations == 0, static_cast<double>(violations), 0.0,
                 "L=8, d <= floor(W/(3L)) = " + std::to_string(dmax) + ", " + std::to_string(cases) +
                     " interior cases; measured = violations of strict inequality"});

  int l1_violations = 0;
  for (int d = 2; d <= dmax; ++d)
    for (int off = 1; off < d; ++off)
      for (const double sigma : {0.0, 0.05}) {
        MseParams p{32, 1, w, 0.0, sigma};
        const double m1 = mse_1st(p, 0, d, off);
        const double m0 = mse_0th(p, off <= d - off ? 0 : d, off);
        const bool ok = sigma == 0.0 ? std::abs(m1 - m0) <= 1e-15 : m1 < m0;
        if (!ok) ++l1_violations;
      }
  out.push_back({"mse1_equals_mse0_only_at_L1_sigma0", l1_violations == 0, static_cast<double>(l1_violations), 0.0,
                 "L=1: equality for sigma=0, strict for sigma>0"});
  return out;
}

std::vector<Check> complexity_checks(const ExperimentConfig& c) {
  std::vector<Check> out;
  Rng rng = validate_rng(c, 2);
  auto uniform_int = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng.bits64() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  constexpr int kFft = 256;
  constexpr int kDelay = 8;
  int mismatches = 0;
  for (std::size_t k = 0; k < c.validate.complexity_tuples; ++k) {
    SystemConfig sys;
    sys.fft_size = kFft;
    sys.delay_spread = kDelay;
    sys.num_bs_antennas = uniform_int(1, 40);
    sys.num_users = uniform_int(1, 6);
    const int n_active = uniform_int(4, 200);
    sys.active_set = centered_active_set(kFft, n_active);
    const auto n_base = static_cast<std::size_t>(uniform_int(1, n_active));
    // random subset so that unbracketed edge targets occur
    std::vector<int> pool = sys.active_set;
    for (std::size_t i = 0; i < n_base; ++i)
      std::swap(pool[i], pool[i + rng.bits64() % (pool.size() - i)]);
    std::vector<int> base(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_base));
    std::sort(base.begin(), base.end());
    const auto plan = BasePointPlan::from_base_points(sys.active_set, base);
    const FdChannel fd = td_to_fd(gen_td_channel(sys, rng), sys);
    for (const auto method : {GramMethod::kBruteForce, GramMethod::kExact, GramMethod::kOrder0,
                              GramMethod::kOrder1}) {
      const auto measured = instrumented_count(method, fd, plan, kDelay, kFft);
      const auto analytical = analytical_cost(method, plan, sys.num_bs_antennas, sys.num_users);
      if (measured != analytical) ++mismatches;
    }
  }
  out.push_back({"instrumented_equals_analytical", mismatches == 0, static_cast<double>(mismatches), 0.0,
                 std::to_string(c.validate.complexity_tuples) +
                     " random (|Omega|,|P|,B,U) tuples x 4 methods, random base subsets"});

  constexpr std::uint64_t kActive = 1200, kBs = 128, kUsers = 8;
  const std::uint64_t bf = cost_bf(kActive, kBs, kUsers);
  bool table_ok = bf == 19'660'800 && cost_exact(kActive, 287, kBs, kUsers) == 42'434'672 &&
                  cost_0th(300, kBs, kUsers) == 4'915'200 &&
                  cost_1st(kActive, 300, kBs, kUsers) == 5'044'800;
  for (const std::uint64_t p : {300, 600, 900, 1200}) {
    table_ok = table_ok && cost_0th(p, kBs, kUsers) * kActive == bf * p;
    table_ok = table_ok && cost_1st(kActive, p, kBs, kUsers) - cost_0th(p, kBs, kUsers) ==
                               2 * (kActive - p) * kUsers * (kUsers + 1);
  }
  table_ok = table_ok && cost_exact(kActive, kActive, kBs, kUsers) == bf &&
             cost_1st(kActive, kActive, kBs, kUsers) == bf;
  out.push_back({"reference_cost_table", table_ok, static_cast<double>(bf), 19'660'800.0,
                 "B=128 U=8 |Omega|=1200, |P| in {300,600,900,1200}; measured = C_BF"});

  std::uint64_t first_not_cheaper = 0;
  for (std::uint64_t p = 1; p <= kActive; ++p)
    if (cost_exact(kActive, p, kBs, kUsers) >= bf) {
      first_not_cheaper = p;
      break;
    }
  bool tail_ok = true;
  for (std::uint64_t p = first_not_cheaper; p <= kActive; ++p)
    tail_ok = tail_ok && cost_exact(kActive, p, kBs, kUsers) >= bf;
  const std::uint64_t expected = (kBs * kUsers + kUsers) / (kUsers + 1);  // ceil(BU/(U+1))
  out.push_back({"exact_break_even", tail_ok && first_not_cheaper == expected,
                 static_cast<double>(first_not_cheaper), static_cast<double>(expected),
                 "smallest |P| with cost_exact >= cost_bf at B=128 U=8 |Omega|=1200"});
  return out;
}

Check correlation_sqrt(const ExperimentConfig& c) {
  const int b = c.scenario.bs_antennas;
  double worst = 0.0;
  for (const double delta : {-1.0 / (b - 1), -0.01, 0.0, 0.1, 0.5, 0.99}) {
    const auto k = corr_sqrt_coeffs(delta, b);
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(b, b);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(b, b);
    const Eigen::MatrixXd s = k.alpha * id + k.beta * ones;
    const Eigen::MatrixXd r = (1.0 - delta) * id + delta * ones;
    worst = std::max(worst, (s * s - r).cwiseAbs().maxCoeff());
  }
  constexpr double kTol = 1e-12;
  return {"correlation_sqrt_identity", worst <= kTol, worst, kTol,
          "max |(aI+b1)^2 - R| over delta grid"};
}

}  // namespace

ResultTable run_validate(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  std::vector<Check> checks;
  const auto l = static_cast<std::size_t>(config.scenario.delay_spread);
  const std::size_t active = config.scenario.system().active_set.size();
  checks.push_back(exactness(config, 2 * l - 1, 10));
  if (4 * l <= active) checks.push_back(exactness(config, 4 * l, 11));
  for (auto& k : kernel_checks()) checks.push_back(std::move(k));
  for (auto& k : oracle_checks(config, options.threads)) checks.push_back(std::move(k));
  checks.push_back(max_bound(config));
  for (auto& k : dominance(config)) checks.push_back(std::move(k));
  for (auto& k : complexity_checks(config)) checks.push_back(std::move(k));
  checks.push_back(correlation_sqrt(config));

  ResultTable t;
  t.name = "validate";
  t.columns = {"property", "passed", "measured", "threshold", "detail"};
  for (const auto& k : checks)
    t.add_row({k.property, std::int64_t{k.passed ? 1 : 0}, k.measured, k.threshold, k.detail});
  stamp_metadata(t, config, options);
  return t;
}

bool all_passed(const ResultTable& table) {
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    if (table.number(r, "passed") != 1.0) return false;
  return !table.rows.empty();
}

}  // namespace gramint::sim
