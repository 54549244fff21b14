#ifndef PDDM_RNG_H_
#define PDDM_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace pddm {

// deterministic sub-seed derivation: one splitmix64 round over base ^ f(stream).
// used to fan a master seed out into independent named streams (model init,
// planning, training, env resets, eval) so adding draws to one stream never
// perturbs another.
uint64_t DeriveSeed(uint64_t base, uint64_t stream);

// deterministic random source. the distributions are implemented here rather
// than taken from <random> so that sampled values depend only on the seed and
// the call sequence, not on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t NextUint64() { return gen_(); }

  // uniform in [0, 1), 53-bit resolution
  double Uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // standard normal via Box-Muller (cosine branch only; no cached state)
  double Gaussian();

  // uniform integer in [0, n), n >= 1
  uint64_t Below(uint64_t n);

  // Fisher-Yates
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pddm

#endif  // PDDM_RNG_H_
