#pragma once

#include <cstdint>
#include <vector>

#include "gramint/grammat.hpp"

namespace gramint {

/// Scaled Fejer kernel f_L(phi) = sin^2(L phi / 2) / (L^2 sin^2(phi / 2)),
/// equal to 1 at phi = 0 mod 2 pi. Always in [0, 1].
double fejer(int delay_spread, double phi);

struct MseParams {
  int num_bs_antennas = 128;  // B
  int delay_spread = 144;     // L
  int fft_size = 2048;        // W
  double correlation = 0.0;   // delta
  double csi_error_std = 0.0;  // sigma

  /// 2 sigma^2 (2 + B sigma^2)
  double eps_csi() const;
  /// delta^2 (B - 1)
  double eps_cor() const;
  /// (2 / B)(1 + eps_cor)
  double kernel_scale() const;
};

/// MSE of nearest-base-point interpolation from base point p to target w.
double mse_0th(const MseParams& params, int base_point, int target);

/// MSE of linear interpolation between p_k < p_{k+1} at p_k <= w <= p_{k+1}.
/// Throws std::invalid_argument for a degenerate or non-bracketing geometry.
double mse_1st(const MseParams& params, int lower, int upper, int target);

/// B -> infinity limit of mse_0th (valid when eps_csi -> 0).
double mse_0th_limit(double correlation, int delay_spread, int fft_size, int base_point,
                     int target);

/// Upper bound on max_w mse_0th over all targets given the maximum distance.
double mse_0th_max_bound(const MseParams& params, int max_distance);

/// Sufficient condition d_k <= W / (3L) for mse_1st <= mse_0th on (p_k, p_{k+1}).
bool dominance_condition(int spacing, int fft_size, int delay_spread);

enum class InterpOrder { kZeroth = 0, kFirst = 1 };

/// Predicted MSE for every target subcarrier of a plan.
struct MsePrediction {
  InterpOrder order = InterpOrder::kZeroth;
  std::vector<int> targets;
  std::vector<double> values;
};

/// Unbracketed edge targets use the 0th-order formula under both orders.
MsePrediction predict_mse(const MseParams& params, const BasePointPlan& plan,
                          InterpOrder order);

/// Base points (one or two) and a target subcarrier.
struct MseGeometry {
  std::vector<int> base_points;
  int target = 0;
};

struct OracleOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  int entry_row = 0;
  int entry_col = 1;
  unsigned threads = 1;
};

struct OracleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

struct OracleResult {
  OracleEstimate order0;
  OracleEstimate order1;
};

/// Monte-Carlo estimate of E|[G~_w]_{m,n} - [G_w]_{m,n}|^2 built end to end
/// from the channel and grammat modules: fresh TD channel, BS correlation,
/// DFT, CSI error, then brute-force and interpolated Grams per trial. Only
/// max(m, n) + 1 users are simulated since user columns are independent.
/// Trial t draws from Rng(seed, kMseOracle, t); the reduction is pairwise in
/// trial order, so results do not depend on `threads`.
OracleResult mse_oracle(const MseParams& params, const MseGeometry& geometry,
                        const OracleOptions& options);

OracleEstimate mse_empirical_oracle(const MseParams& params, const MseGeometry& geometry,
                                    InterpOrder order, const OracleOptions& options);

}  // namespace gramint
