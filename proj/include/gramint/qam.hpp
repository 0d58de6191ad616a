#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gramint/types.hpp"

namespace gramint {

/// Gray-labeled 16-QAM. A 4-bit label b0 b1 b2 b3 (b0 first on the wire)
/// maps b0 b1 to the in-phase level and b2 b3 to the quadrature level with
/// the per-axis Gray code 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, scaled to
/// average energy Es.
class QamConstellation {
 public:
  static constexpr int kOrder = 16;
  static constexpr int kBitsPerSymbol = 4;

  explicit QamConstellation(double symbol_energy = 1.0);

  double symbol_energy() const { return symbol_energy_; }
  /// Distance between adjacent levels on one axis.
  double min_spacing() const { return 2.0 * scale_; }
  cdouble point(unsigned label) const { return points_[label]; }
  const std::array<cdouble, kOrder>& points() const { return points_; }

  /// Minimum-distance decision, returned as a label.
  unsigned decide(cdouble estimate) const;

  /// bits.size() must be a multiple of 4; each element is 0 or 1.
  std::vector<cdouble> map(std::span<const std::uint8_t> bits) const;
  std::vector<std::uint8_t> demap(std::span<const cdouble> estimates) const;

 private:
  double symbol_energy_;
  double scale_;
  std::array<cdouble, kOrder> points_{};
};

}  // namespace gramint
