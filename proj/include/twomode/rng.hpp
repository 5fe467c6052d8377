#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace twomode {

// Seeded generator with hand-rolled variate transforms. mt19937_64 has a
// standardized bit stream, and doing the uniform/normal mapping ourselves
// keeps sampled output byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1], safe as a log argument
  double uniform_pos() { return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53; }

  // standard normal via Box-Muller, one spare cached
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = uniform_pos();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * v);
  }

  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  // flat Dirichlet via normalized exponentials
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
      x = -std::log(uniform_pos());
      total += x;
    }
    for (auto& x : w) x /= total;
    return w;
  }

  // derive an independent stream for sample i of a campaign (splitmix64 mix)
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace twomode
