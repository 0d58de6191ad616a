#include "gramint/rng.hpp"

namespace gramint {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream,
                          std::uint64_t index) {
  const std::uint64_t a = splitmix64(root ^ splitmix64(stream));
  return splitmix64(a ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

}  // namespace gramint
