#include "gramint/qam.hpp"

#include <cmath>
#include <stdexcept>

namespace gramint {

namespace {

// Gray pair (hi, lo) -> level index 0..3 for levels -3, -1, +1, +3.
constexpr std::array<int, 4> kGrayToLevel = {0, 1, 3, 2};  // 00,01,10,11
constexpr std::array<unsigned, 4> kLevelToGray = {0b00, 0b01, 0b11, 0b10};

double level_value(int level) { return 2.0 * level - 3.0; }

int slice(double x) {
  if (x < -2.0) return 0;
  if (x < 0.0) return 1;
  if (x < 2.0) return 2;
  return 3;
}

}  // namespace

QamConstellation::QamConstellation(double symbol_energy)
    : symbol_energy_(symbol_energy), scale_(std::sqrt(symbol_energy / 10.0)) {
  if (symbol_energy <= 0.0) throw std::invalid_argument("symbol energy must be positive");
  for (unsigned label = 0; label < kOrder; ++label) {
    const int i_level = kGrayToLevel[label >> 2];
    const int q_level = kGrayToLevel[label & 0b11];
    points_[label] = {scale_ * level_value(i_level), scale_ * level_value(q_level)};
  }
}

unsigned QamConstellation::decide(cdouble estimate) const {
  const unsigned hi = kLevelToGray[static_cast<std::size_t>(slice(estimate.real() / scale_))];
  const unsigned lo = kLevelToGray[static_cast<std::size_t>(slice(estimate.imag() / scale_))];
  return (hi << 2) | lo;
}

std::vector<cdouble> QamConstellation::map(std::span<const std::uint8_t> bits) const {
  if (bits.size() % kBitsPerSymbol != 0)
    throw std::invalid_argument("bit count must be a multiple of 4");
  std::vector<cdouble> out(bits.size() / kBitsPerSymbol);
  for (std::size_t s = 0; s < out.size(); ++s) {
    const auto* b = bits.data() + kBitsPerSymbol * s;
    const unsigned label = (unsigned{b[0]} << 3) | (unsigned{b[1]} << 2) |
                           (unsigned{b[2]} << 1) | unsigned{b[3]};
    out[s] = points_[label];
  }
  return out;
}

std::vector<std::uint8_t> QamConstellation::demap(std::span<const cdouble> estimates) const {
  std::vector<std::uint8_t> bits(estimates.size() * kBitsPerSymbol);
  for (std::size_t s = 0; s < estimates.size(); ++s) {
    const unsigned label = decide(estimates[s]);
    for (int k = 0; k < kBitsPerSymbol; ++k)
      bits[kBitsPerSymbol * s + static_cast<std::size_t>(k)] =
          static_cast<std::uint8_t>((label >> (kBitsPerSymbol - 1 - k)) & 1u);
  }
  return bits;
}

}  // namespace gramint
