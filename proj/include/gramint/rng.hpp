#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

#include "gramint/types.hpp"

namespace gramint {

/// Stream identifiers mixed into per-trial seeds. Values are part of the
/// output reproducibility contract; never renumber.
enum class StreamId : std::uint64_t {
  kMseOracle = 1,
  kBer = 2,
  kValidate = 3,
  kUnitTest = 99,
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from (root, stream, index):
///   s = mix(mix(root ^ mix(stream)) ^ mix(index + golden))
/// where mix is splitmix64. Stable across platforms and releases.
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream,
                          std::uint64_t index);

/// Deterministic random stream: mt19937_64 engine with a ziggurat normal
/// sampler. Both are specified algorithms, so draws are reproducible across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Rng(std::uint64_t root, StreamId stream, std::uint64_t index)
      : engine_(stream_seed(root, static_cast<std::uint64_t>(stream), index)) {}

  double normal() { return normal_(engine_); }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cdouble complex_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  std::uint64_t bits64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace gramint
