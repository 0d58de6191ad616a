#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gramint/ber.hpp"
#include "gramint/channel.hpp"
#include "gramint/grammat.hpp"

namespace gramint::sim {

enum class ExperimentKind { kMse, kBer, kComplexity, kTradeoff, kValidate };
enum class Scale { kDesk, kPaper };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);
std::string_view to_string(Scale scale);
Scale parse_scale(std::string_view name);
std::string_view to_string(CsiMode mode);
CsiMode parse_csi_mode(std::string_view name);
std::string_view to_string(ChannelModel model);
ChannelModel parse_channel_model(std::string_view name);

struct ScenarioConfig {
  int bs_antennas = 32;
  int users = 4;
  int fft_size = 256;
  int active_count = 200;
  int active_first = -1;  // -1: block centred in [0, W)
  int delay_spread = 16;
  double correlation = 0.0;
  double csi_error_std = 0.0;
  double symbol_energy = 1.0;
  ChannelModel channel = ChannelModel::kIid;
  double pdp_decay = 0.05;

  SystemConfig system() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct MseSection {
  std::vector<int> bs_sweep{16, 32, 64};
  std::vector<int> delay_spreads{36, 72, 144};
  int fft_size = 2048;
  std::vector<int> base_points{500, 600};
  int target = 512;
  int entry_row = 0;
  int entry_col = 1;
  double csi_snr_db = 25.0;          // non-ideal scenario: sigma from SNR = U/(B sigma^2)
  double nonideal_correlation = 0.1;
  std::size_t trials = 10000;
  friend bool operator==(const MseSection&, const MseSection&) = default;
};

struct BerSection {
  std::vector<double> snr_db;
  std::vector<std::size_t> base_point_counts;
  std::vector<GramMethod> methods{GramMethod::kExact, GramMethod::kOrder0, GramMethod::kOrder1};
  std::vector<CsiMode> csi_modes{CsiMode::kPerfect, CsiMode::kEstimated};
  std::size_t trials = 20;
  friend bool operator==(const BerSection&, const BerSection&) = default;
};

struct ComplexitySection {
  std::vector<double> base_point_fractions{0.25, 0.5, 0.75, 1.0};
  bool measure = true;
  friend bool operator==(const ComplexitySection&, const ComplexitySection&) = default;
};

struct TradeoffSection {
  std::vector<std::size_t> base_point_counts;
  std::vector<double> snr_db;
  double target_ber = 1e-3;
  double reference_fraction = 0.45;  // order1 |P| closest to this share of C_BF is always added
  CsiMode csi = CsiMode::kEstimated;
  std::size_t trials = 20;
  friend bool operator==(const TradeoffSection&, const TradeoffSection&) = default;
};

struct ValidateSection {
  std::size_t oracle_trials = 20000;
  double oracle_sigmas = 4.0;  // allowed |empirical - theory| in standard errors
  std::size_t complexity_tuples = 20;
  friend bool operator==(const ValidateSection&, const ValidateSection&) = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kValidate;
  std::uint64_t seed = 1;
  Scale scale = Scale::kDesk;
  ScenarioConfig scenario;
  MseSection mse;
  BerSection ber;
  ComplexitySection complexity;
  TradeoffSection tradeoff;
  ValidateSection validate;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Defaults for a scale. Desk: B=32, U=4, W=256, |Omega|=200, L=16.
/// Paper: B=128, U=8, W=2048, |Omega|=1200, L=144.
ExperimentConfig preset(ExperimentKind kind, Scale scale);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// INI-style text: "[section]" headers, "key = value" lines, '#' comments.
/// Lists are comma separated. Every key of every section is written.
std::string serialize(const ExperimentConfig& config);

/// Starts from `base` and overrides the keys present in `text`. Unknown
/// sections or keys, malformed values and duplicate keys raise ConfigError
/// with the offending line number.
ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base);

/// Reads and parses a file; `base` supplies keys the file omits.
ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base);

/// Sanity checks that need the whole config (e.g. counts within |Omega|).
void validate_config(const ExperimentConfig& config);

/// 64-bit FNV-1a of serialize(config), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace gramint::sim
