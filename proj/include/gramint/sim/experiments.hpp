#pragma once

#include <optional>
#include <string>

#include "gramint/sim/experiment_config.hpp"
#include "gramint/sim/result_table.hpp"

namespace gramint::sim {

struct RunOptions {
  unsigned threads = 1;
  /// Adds a "generated" UTC timestamp to the metadata. Off by default so that
  /// reruns are byte-identical.
  std::optional<std::string> timestamp;
};

/// MSE sweep: closed form and Monte-Carlo oracle per (B, L, scenario).
ResultTable run_mse_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// BER vs. SNR per CSI mode, method and base-point count, plus brute force.
ResultTable run_ber_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Analytical and instrumented Gram costs with their share of detection.
ResultTable run_complexity_report(const ExperimentConfig& config, const RunOptions& options = {});

/// Required SNR for the target BER against complexity fraction of C_BF.
ResultTable run_tradeoff_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Property suite; one row per property with a pass flag. Callers exit
/// nonzero when any row fails (see all_passed).
ResultTable run_validate(const ExperimentConfig& config, const RunOptions& options = {});
bool all_passed(const ResultTable& validate_table);

ResultTable run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Plot definition matching the table produced for config.kind.
PlotSpec plot_spec(const ExperimentConfig& config, const ResultTable& table);

/// |P| whose order-1 cost is closest to fraction * C_BF (ties to the smaller).
std::size_t reference_base_points(double fraction, std::size_t num_active, std::size_t num_bs,
                                  std::size_t num_users);

/// Config hash, seed, version, conventions and the full serialized config.
void stamp_metadata(ResultTable& table, const ExperimentConfig& config, const RunOptions& options);

}  // namespace gramint::sim
