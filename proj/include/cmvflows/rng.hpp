#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace cmvflows {

// splitmix64: tiny, seedable, identical across platforms.  All randomized
// checks in the test suites and the CLI draw from this generator so that
// reported numbers are reproducible from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform on the disk of radius rmax, with |z| >= rmin (both in modulus)
  std::complex<double> disk(double rmax, double rmin = 0.0) {
    const double pi = 3.14159265358979323846;
    double r = uniform(rmin, rmax);
    double th = uniform(0.0, 2.0 * pi);
    return std::polar(r, th);
  }

  std::vector<std::complex<double>> alpha_vector(int p, double rmax,
                                                 double rmin = 0.0) {
    std::vector<std::complex<double>> a(static_cast<std::size_t>(p));
    for (auto& z : a) z = disk(rmax, rmin);
    return a;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cmvflows
