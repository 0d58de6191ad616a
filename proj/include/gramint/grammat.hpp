#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gramint/channel.hpp"
#include "gramint/types.hpp"

namespace gramint {

enum class GramMethod { kBruteForce, kExact, kOrder0, kOrder1 };

std::string_view to_string(GramMethod method);
/// Accepts "bf", "exact", "order0", "order1". Throws std::invalid_argument.
GramMethod parse_gram_method(std::string_view name);

/// Real-multiplication tally. Kernels add the multiplies they execute; a
/// complex product counts 4 and a squared magnitude counts 2.
struct OpCounter {
  std::uint64_t real_mults = 0;
  void add(std::uint64_t n) { real_mults += n; }
};

struct GramSet {
  std::vector<int> subcarriers;
  std::vector<CMatrix> grams;  // U x U Hermitian, aligned with subcarriers
  GramMethod method = GramMethod::kBruteForce;

  std::size_t size() const { return grams.size(); }
};

/// Base points P within the active set, with nearest-neighbour and bracketing
/// assignments for every remaining subcarrier. Positions refer to indices into
/// active_set().
class BasePointPlan {
 public:
  struct Target {
    std::size_t position;  // index into active_set()
    std::size_t nearest;   // ties go to the lower subcarrier
    std::size_t lower;     // bracketing pair; lower == upper for edge targets
    std::size_t upper;
    double lambda;         // weight of the lower base point
    bool bracketed;
  };

  /// `count` base points at evenly spaced positions of the active set,
  /// including both ends when count >= 2 and the centre when count == 1.
  static BasePointPlan uniform(std::vector<int> active_set, std::size_t count);

  /// Explicit base points; each must be an element of active_set.
  static BasePointPlan from_base_points(std::vector<int> active_set,
                                        std::vector<int> base_points);

  const std::vector<int>& active_set() const { return active_; }
  const std::vector<int>& base_points() const { return base_points_; }
  const std::vector<std::size_t>& base_positions() const { return base_positions_; }
  const std::vector<Target>& targets() const { return targets_; }

  /// Subcarriers of Omega \ P in increasing order.
  std::vector<int> target_subcarriers() const;
  /// d_k = p_{k+1} - p_k.
  std::vector<int> spacings() const;
  /// max_k floor(d_k / 2); 0 for a single base point.
  int max_distance() const;
  std::size_t edge_target_count() const;

 private:
  BasePointPlan(std::vector<int> active_set, std::vector<std::size_t> positions);

  std::vector<int> active_;
  std::vector<int> base_points_;
  std::vector<std::size_t> base_positions_;
  std::vector<Target> targets_;
};

/// G_w = H_w^H H_w, upper triangle computed and mirrored.
GramSet gram_brute_force(const FdChannel& fd, OpCounter* counter = nullptr);

/// Rows of the unitary W-point DFT restricted to `rows` and to columns
/// 0..L-1, W-L+1..W-1. Throws std::invalid_argument when 2L-1 > W.
CMatrix build_dft_submatrix(std::span<const int> rows, int delay_spread, int fft_size);

class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& what, double condition_number)
      : std::runtime_error(what), condition_number_(condition_number) {}
  double condition_number() const { return condition_number_; }

 private:
  double condition_number_;
};

struct ExactInterpOptions {
  /// Singular values below rcond * s_max are dropped from the pseudo-inverse.
  double rcond = 1e-10;
  /// Throw RankDeficiencyError instead of truncating.
  bool reject_rank_deficient = false;
};

/// Precomputed F_{Omega\P,L} F_{P,L}^+ for one (Omega, P, L, W). Read-only
/// after construction.
class ExactInterpolator {
 public:
  ExactInterpolator(const BasePointPlan& plan, int delay_spread, int fft_size,
                    ExactInterpOptions options = {});

  const CMatrix& op() const { return op_; }
  double condition_number() const { return condition_number_; }
  int rank() const { return rank_; }
  /// True when singular values were discarded.
  bool truncated() const { return truncated_; }
  /// True when |P| < 2L - 1.
  bool underdetermined() const { return underdetermined_; }
  std::string diagnostic() const;

  GramSet apply(const FdChannel& fd, OpCounter* counter = nullptr) const;
  /// Fills the targets of `grams`, whose base-point entries must be set.
  void interpolate(GramSet& grams, OpCounter* counter = nullptr) const;

 private:
  BasePointPlan plan_;
  CMatrix op_;
  double condition_number_ = 1.0;
  int rank_ = 0;
  bool truncated_ = false;
  bool underdetermined_ = false;
};

GramSet gram_exact_interp(const FdChannel& fd, const BasePointPlan& plan,
                          int delay_spread, int fft_size,
                          ExactInterpOptions options = {},
                          OpCounter* counter = nullptr);

/// Nearest base-point copy (0th order).
GramSet gram_interp_0th(const FdChannel& fd, const BasePointPlan& plan,
                        OpCounter* counter = nullptr);

/// lambda G_{p_k} + (1 - lambda) G_{p_{k+1}} (1st order); edge targets copy
/// their nearest base point.
GramSet gram_interp_1st(const FdChannel& fd, const BasePointPlan& plan,
                        OpCounter* counter = nullptr);

/// Builds the method's Gram set reusing base-point Grams from an existing
/// brute-force set (same values the kernels would compute, no counting).
GramSet derive_grams(GramMethod method, const GramSet& brute_force,
                     const BasePointPlan& plan, const ExactInterpolator* exact);

/// Dispatches on method. `exact` must be non-null for GramMethod::kExact.
GramSet compute_grams(GramMethod method, const FdChannel& fd,
                      const BasePointPlan& plan, const ExactInterpolator* exact,
                      OpCounter* counter = nullptr);

}  // namespace gramint
