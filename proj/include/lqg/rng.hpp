#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lqg {

// Finalizer of the splitmix64 generator. Bijective on 64-bit words, so
// distinct inputs can never collide.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derive the seed of stream `stream` from a base seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base + 0x632BE59BD9B4E019ULL * (stream + 1));
}

// Standard normal stream: mt19937_64 bits fed through an explicit Box-Muller
// transform. std::normal_distribution is implementation-defined, so it would
// break bit-level reproducibility across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  // Uniform on (0,1].
  double uniform_pos() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }
  // Uniform on [0,1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lqg
