#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace egonet {

// mt19937_64 output is pinned by the standard; the stdlib *distributions* are
// not. Everything random in this project goes through these helpers so results
// are bit-identical across platforms and library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t raw() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound) by rejection.
  uint64_t below(uint64_t bound) {
    if (bound == 0) return 0;
    uint64_t mask = ~uint64_t{0} >> __builtin_clzll(bound | 1);
    uint64_t x;
    do {
      x = engine_() & mask;
    } while (x >= bound);
    return x;
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace egonet
