#include "pddm/rng.hpp"

#include <cmath>

namespace pddm {

namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t DeriveSeed(uint64_t base, uint64_t stream) {
  return SplitMix64(base ^ SplitMix64(stream + 0x632be59bd9b4e019ULL));
}

double Rng::Gaussian() {
  // u1 in (0, 1] keeps the log finite
  double u1 = 1.0 - Uniform();
  double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

uint64_t Rng::Below(uint64_t n) {
  // multiply-shift map of a 64-bit draw onto [0, n)
  return static_cast<uint64_t>((static_cast<__uint128_t>(gen_()) * n) >> 64);
}

}  // namespace pddm
