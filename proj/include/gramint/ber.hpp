#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gramint/channel.hpp"
#include "gramint/grammat.hpp"

namespace gramint {

enum class CsiMode {
  kPerfect,    // equalize with the true channel
  kEstimated,  // ML estimate from one orthogonal U-slot pilot block per subcarrier
  kPerturbed,  // true channel plus cfg.csi_error_std * E
};

enum class ChannelModel { kIid, kExpPdp };

/// One Gram-computation setup evaluated on every trial. base_points is
/// ignored for brute force.
struct GramVariant {
  GramMethod method = GramMethod::kBruteForce;
  std::size_t base_points = 0;

  std::string label() const;
  friend bool operator==(const GramVariant&, const GramVariant&) = default;
};

/// SNR convention: snr = Es / N0. With per-entry channel power 1/B the
/// per-user received energy Es E||h_u||^2 equals Es, so this is the per-user
/// receive SNR after combining over all antennas.
inline constexpr const char* kSnrConvention = "snr_db=10*log10(Es/N0); E||h_u||^2=1";

struct BerRequest {
  SystemConfig cfg;  // noise_variance is set per SNR point
  ChannelModel channel = ChannelModel::kIid;
  double pdp_decay = 0.05;
  CsiMode csi = CsiMode::kPerfect;
  std::vector<GramVariant> variants;
  std::vector<double> snr_db;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct BerPoint {
  double snr_db = 0.0;
  std::uint64_t bit_errors = 0;
  std::uint64_t total_bits = 0;

  double ber() const {
    return total_bits ? static_cast<double>(bit_errors) / static_cast<double>(total_bits) : 0.0;
  }
};

struct BerCurve {
  GramVariant variant;
  std::vector<BerPoint> points;
  /// Exact-interpolation operator diagnostics (empty for other methods).
  std::string diagnostic;
};

struct BerResult {
  std::vector<BerCurve> curves;

  std::uint64_t bit_errors() const;
  std::uint64_t total_bits() const;
  double ber() const;
  const BerCurve& curve(const GramVariant& variant) const;
};

/// Monte-Carlo uplink BER with MMSE equalization over y = H s + n. Every
/// variant and SNR point sees the same channel, bits and unit-variance noise
/// draws within a trial; trial t draws from Rng(seed, kBer, t).
BerResult simulate_uplink_ber(const BerRequest& request);

/// SNR (dB) at which the curve crosses target_ber, by linear interpolation of
/// log10(BER) between the bracketing grid points. nullopt when the curve
/// stays above the target; the first grid point when it starts below.
std::optional<double> required_snr_db(const BerCurve& curve, double target_ber);

}  // namespace gramint
