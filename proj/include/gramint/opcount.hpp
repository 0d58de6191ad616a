#pragma once

#include <cstdint>
#include <string>

#include "gramint/grammat.hpp"

namespace gramint {

// Real-multiplication counts of the four Gram-computation methods. The exact
// method excludes building F_{Omega\P,L} F_{P,L}^+ (precomputed once).

/// 2 |Omega| B U^2
std::uint64_t cost_bf(std::uint64_t num_active, std::uint64_t num_bs, std::uint64_t num_users);

/// 2 |P| (|Omega| - |P| + B) U^2 + 2 |P| (|Omega| - |P|) U
std::uint64_t cost_exact(std::uint64_t num_active, std::uint64_t num_base,
                         std::uint64_t num_bs, std::uint64_t num_users);

/// 2 |P| B U^2
std::uint64_t cost_0th(std::uint64_t num_base, std::uint64_t num_bs, std::uint64_t num_users);

/// 2 |P| B U^2 + 2 (|Omega| - |P|) U (U + 1)
std::uint64_t cost_1st(std::uint64_t num_active, std::uint64_t num_base,
                       std::uint64_t num_bs, std::uint64_t num_users);

/// cost_1st minus the interpolation multiplies of targets outside the outer
/// base points, which are copied: 2 * edges * U (U + 1).
std::uint64_t cost_1st_with_edges(std::uint64_t num_active, std::uint64_t num_base,
                                  std::uint64_t num_edge_targets, std::uint64_t num_bs,
                                  std::uint64_t num_users);

/// Analytical count for a method/plan, with the edge correction for order1.
std::uint64_t analytical_cost(GramMethod method, const BasePointPlan& plan,
                              std::uint64_t num_bs, std::uint64_t num_users);

/// Runs the grammat kernel for `method` and returns the real multiplies it
/// executed. Operator precomputation for kExact is not counted.
std::uint64_t instrumented_count(GramMethod method, const FdChannel& fd,
                                 const BasePointPlan& plan, int delay_spread, int fft_size);

// Remaining per-subcarrier detection work, used to put Gram costs in context.
// Matched filter H^H y: B U complex products = 4 B U.
// Regularized U x U inversion: U^3 complex products = 4 U^3.

std::uint64_t cost_matched_filter(std::uint64_t num_active, std::uint64_t num_bs,
                                  std::uint64_t num_users);
std::uint64_t cost_inversion(std::uint64_t num_active, std::uint64_t num_users);

struct ComplexityReport {
  GramMethod method = GramMethod::kBruteForce;
  std::uint64_t analytical = 0;
  std::uint64_t measured = 0;
  bool has_measured = false;
  double ratio_vs_bf = 0.0;
  /// Gram cost / (Gram + matched filter + inversion)
  double gram_share = 0.0;
  std::uint64_t detection_total = 0;
};

ComplexityReport complexity_report(GramMethod method, const BasePointPlan& plan,
                                   std::uint64_t num_bs, std::uint64_t num_users);

}  // namespace gramint
