#include <doctest.h>

#include <bit>
#include <set>

#include "gramint/qam.hpp"

using namespace gramint;

TEST_SUITE("qam") {

TEST_CASE("unit average energy and bijection") {
  for (const double es : {1.0, 2.5}) {
    const QamConstellation q(es);
    double energy = 0.0;
    std::set<std::pair<double, double>> seen;
    for (unsigned k = 0; k < 16; ++k) {
      energy += std::norm(q.point(k));
      seen.insert({q.point(k).real(), q.point(k).imag()});
      CHECK(q.decide(q.point(k)) == k);
    }
    CHECK(std::abs(energy / 16 - es) <= 1e-12);
    CHECK(seen.size() == 16);
  }
}

TEST_CASE("Gray property on each axis") {
  const QamConstellation q;
  const double step = q.min_spacing();
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b) {
      const cdouble d = q.point(a) - q.point(b);
      const bool horizontal = std::abs(std::abs(d.real()) - step) < 1e-12 && std::abs(d.imag()) < 1e-12;
      const bool vertical = std::abs(std::abs(d.imag()) - step) < 1e-12 && std::abs(d.real()) < 1e-12;
      if (horizontal || vertical) CHECK(std::popcount(a ^ b) == 1);
    }
}

TEST_CASE("map/demap round trip and decision regions") {
  const QamConstellation q;
  std::vector<std::uint8_t> bits;
  for (unsigned k = 0; k < 16; ++k)
    for (int i = 0; i < 4; ++i) bits.push_back(static_cast<std::uint8_t>((k >> (3 - i)) & 1));
  const auto symbols = q.map(bits);
  REQUIRE(symbols.size() == 16);
  CHECK(q.demap(symbols) == bits);

  const double r = 0.49 * q.min_spacing();
  for (unsigned k = 0; k < 16; ++k)
    for (const cdouble off : {cdouble(r, 0), cdouble(-r, 0), cdouble(0, r), cdouble(0.3 * r, -0.3 * r)})
      CHECK(q.decide(q.point(k) + off) == k);
  CHECK_THROWS_AS(q.map(std::vector<std::uint8_t>{1, 0, 1}), std::invalid_argument);
}

}
