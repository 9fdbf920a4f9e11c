#ifndef PCURL_UTIL_HPP
#define PCURL_UTIL_HPP

#include <cstdint>
#include <random>

namespace pcurl {

// Compensated (Kahan) accumulator. All measure-weighted reductions go
// through this so the discrete identities hold to ~1e-13 even on the
// finest grids.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// Deterministic uniform generator: mt19937_64 plus an explicit 53-bit
// mapping, so streams do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace pcurl

#endif
