#include "gramint/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gramint/channel.hpp"
#include "gramint/parallel.hpp"

namespace gramint {

double fejer(int delay_spread, double phi) {
  const double half = std::sin(0.5 * phi);
  if (std::abs(half) < 1e-8) return 1.0;
  const double ratio = std::sin(0.5 * delay_spread * phi) / (delay_spread * half);
  return std::min(1.0, ratio * ratio);
}

double MseParams::eps_csi() const {
  const double s2 = csi_error_std * csi_error_std;
  return 2.0 * s2 * (2.0 + num_bs_antennas * s2);
}

double MseParams::eps_cor() const {
  return correlation * correlation * (num_bs_antennas - 1);
}

double MseParams::kernel_scale() const {
  return 2.0 / num_bs_antennas * (1.0 + eps_cor());
}

namespace {

double phase(int distance, int fft_size) {
  return 2.0 * kPi * distance / fft_size;
}

}  // namespace

double mse_0th(const MseParams& params, int base_point, int target) {
  const double f = fejer(params.delay_spread, phase(base_point - target, params.fft_size));
  return params.eps_csi() + params.kernel_scale() * (1.0 - f);
}

double mse_1st(const MseParams& params, int lower, int upper, int target) {
  if (upper <= lower) throw std::invalid_argument("degenerate bracket: need p_k < p_{k+1}");
  if (target < lower || target > upper)
    throw std::invalid_argument("target outside the bracketing base points");
  const int l = params.delay_spread;
  const double theta = phase(upper - lower, params.fft_size);
  const double lam = static_cast<double>(upper - target) / (upper - lower);
  const double mix = lam * (1.0 - lam);
  const double kernel = 1.0 - mix + mix * fejer(l, theta) -
                        (1.0 - lam) * fejer(l, lam * theta) -
                        lam * fejer(l, (1.0 - lam) * theta);
  return params.eps_csi() * (1.0 - mix) + params.kernel_scale() * kernel;
}

double mse_0th_limit(double correlation, int delay_spread, int fft_size, int base_point,
                     int target) {
  const double f = fejer(delay_spread, phase(base_point - target, fft_size));
  return 2.0 * correlation * correlation * (1.0 - f);
}

double mse_0th_max_bound(const MseParams& params, int max_distance) {
  if (max_distance < 0) throw std::invalid_argument("max distance must be non-negative");
  const auto l = static_cast<long long>(params.delay_spread);
  // d_max >= W / L, compared without rounding
  if (static_cast<long long>(max_distance) * l >= params.fft_size)
    return params.eps_csi() + params.kernel_scale();
  const double f = fejer(params.delay_spread, phase(max_distance, params.fft_size));
  return params.eps_csi() + params.kernel_scale() * (1.0 - f);
}

bool dominance_condition(int spacing, int fft_size, int delay_spread) {
  return 3LL * delay_spread * spacing <= fft_size;
}

MsePrediction predict_mse(const MseParams& params, const BasePointPlan& plan,
                          InterpOrder order) {
  MsePrediction out;
  out.order = order;
  const auto& active = plan.active_set();
  for (const auto& t : plan.targets()) {
    const int w = active[t.position];
    out.targets.push_back(w);
    if (order == InterpOrder::kFirst && t.bracketed)
      out.values.push_back(mse_1st(params, active[t.lower], active[t.upper], w));
    else
      out.values.push_back(mse_0th(params, active[t.nearest], w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracle

namespace {

OracleEstimate summarize(std::vector<double>& samples) {
  OracleEstimate est;
  est.trials = samples.size();
  if (samples.empty()) return est;
  const double n = static_cast<double>(samples.size());
  est.mean = pairwise_sum(samples.data(), samples.size()) / n;
  for (auto& x : samples) x = (x - est.mean) * (x - est.mean);
  const double var = samples.size() > 1 ? pairwise_sum(samples.data(), samples.size()) / (n - 1) : 0.0;
  est.std_error = std::sqrt(var / n);
  return est;
}

}  // namespace

OracleResult mse_oracle(const MseParams& params, const MseGeometry& geometry,
                        const OracleOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("oracle needs at least one trial");
  if (geometry.base_points.empty() || geometry.base_points.size() > 2)
    throw std::invalid_argument("oracle geometry needs one or two base points");
  if (options.entry_row < 0 || options.entry_col < 0)
    throw std::invalid_argument("gram entry indices must be non-negative");

  std::vector<int> active = geometry.base_points;
  active.push_back(geometry.target);
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());

  SystemConfig cfg;
  cfg.num_bs_antennas = params.num_bs_antennas;
  cfg.num_users = std::max(options.entry_row, options.entry_col) + 1;
  cfg.fft_size = params.fft_size;
  cfg.active_set = active;
  cfg.delay_spread = params.delay_spread;
  cfg.correlation = params.correlation;
  cfg.csi_error_std = params.csi_error_std;
  cfg.validate();

  const auto plan = BasePointPlan::from_base_points(active, geometry.base_points);
  const auto target_pos = static_cast<std::size_t>(
      std::lower_bound(active.begin(), active.end(), geometry.target) - active.begin());
  const Eigen::Index m = options.entry_row;
  const Eigen::Index n = options.entry_col;

  std::vector<double> err0(options.trials);
  std::vector<double> err1(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t trial) {
    Rng rng(options.seed, StreamId::kMseOracle, trial);
    TdChannel td = gen_td_channel(cfg, rng);
    if (cfg.correlation != 0.0) td = apply_bs_correlation(td, cfg.correlation);
    FdChannel fd = td_to_fd(td, cfg);
    if (cfg.csi_error_std > 0.0) fd = perturb_csi(fd, cfg.csi_error_std, rng);

    const GramSet exact = gram_brute_force(fd);
    const GramSet g0 = gram_interp_0th(fd, plan);
    const GramSet g1 = gram_interp_1st(fd, plan);
    const cdouble truth = exact.grams[target_pos](m, n);
    err0[trial] = std::norm(g0.grams[target_pos](m, n) - truth);
    err1[trial] = std::norm(g1.grams[target_pos](m, n) - truth);
  });

  OracleResult out;
  out.order0 = summarize(err0);
  out.order1 = summarize(err1);
  return out;
}

OracleEstimate mse_empirical_oracle(const MseParams& params, const MseGeometry& geometry,
                                    InterpOrder order, const OracleOptions& options) {
  const auto both = mse_oracle(params, geometry, options);
  return order == InterpOrder::kZeroth ? both.order0 : both.order1;
}

}  // namespace gramint
