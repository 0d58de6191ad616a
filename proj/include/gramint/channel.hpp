#pragma once

#include <span>
#include <vector>

#include "gramint/rng.hpp"
#include "gramint/types.hpp"

namespace gramint {

/// Scenario parameters shared by every module.
struct SystemConfig {
  int num_bs_antennas = 32;   // B
  int num_users = 4;          // U
  int fft_size = 256;         // W
  std::vector<int> active_set;  // Omega, strictly increasing, in [0, W)
  int delay_spread = 16;      // L
  double correlation = 0.0;   // delta
  double csi_error_std = 0.0;  // sigma
  double symbol_energy = 1.0;  // Es
  double noise_variance = 0.0;  // N0

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Contiguous block of `count` subcarriers centred in [0, W). For W=2048 and
/// count=1200 this is {424, ..., 1623}; the DC bin is never included when
/// count < W - 1.
std::vector<int> centered_active_set(int fft_size, int count);

struct TdChannel {
  std::vector<CMatrix> taps;  // L matrices, B x U
  bool correlated = false;

  int num_taps() const { return static_cast<int>(taps.size()); }
};

struct FdChannel {
  std::vector<int> subcarriers;  // one entry per matrix in h
  std::vector<CMatrix> h;        // B x U per subcarrier
  double csi_sigma = 0.0;

  std::size_t size() const { return h.size(); }
};

/// Square-root coefficients of R = (1 - delta) I + delta 1:
/// (alpha I + beta 1)^2 = R.
struct CorrSqrtCoeffs {
  double alpha = 1.0;
  double beta = 0.0;
};

/// i.i.d. Rayleigh taps, CN(0, 1/(BL)) per entry. Draw order: tap, column,
/// row.
TdChannel gen_td_channel(const SystemConfig& cfg, Rng& rng);

/// Exponential power-delay profile: tap l has per-entry variance
/// c * exp(-l * decay_rate) / B with sum_l variance = 1/B.
TdChannel gen_exp_pdp_channel(const SystemConfig& cfg, double decay_rate,
                              Rng& rng);

/// Per-tap variances used by gen_exp_pdp_channel.
std::vector<double> exp_pdp_tap_variances(int num_taps, int num_bs_antennas,
                                          double decay_rate);

/// Throws std::invalid_argument if delta^2 > 1 or delta < -1/(B-1).
CorrSqrtCoeffs corr_sqrt_coeffs(double delta, int num_bs_antennas);

/// Applies (alpha I + beta 1) to every tap. Throws std::logic_error when the
/// channel is already correlated.
TdChannel apply_bs_correlation(const TdChannel& td, double delta);

enum class DftPath { kAuto, kDirect, kFft };

/// H_w = sum_l H_l exp(-j 2 pi w l / W) for every w in `subcarriers`.
FdChannel td_to_fd(const TdChannel& td, std::span<const int> subcarriers,
                   int fft_size, DftPath path = DftPath::kAuto);

/// Evaluates on cfg.active_set.
FdChannel td_to_fd(const TdChannel& td, const SystemConfig& cfg);

/// Adds sigma * E_w with fresh CN(0, 1) entries per subcarrier.
/// Throws std::invalid_argument for sigma < 0 and std::logic_error when the
/// input already carries a CSI error.
FdChannel perturb_csi(const FdChannel& fd, double sigma, Rng& rng);

/// sigma = sqrt(U / (B * snr)) from SNR = U / (B sigma^2).
double sigma_from_snr(double snr_linear, int num_bs_antennas, int num_users);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace gramint
