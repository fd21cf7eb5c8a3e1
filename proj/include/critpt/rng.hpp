#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so substreams can be assigned per trial or per
// sample and results do not depend on how work is split across workers.

#include <cmath>
#include <complex>
#include <cstdint>

namespace critpt {

namespace rng_detail {

inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline uint64_t keyed(uint64_t seed, uint64_t stream, uint64_t ctr) {
  uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (stream + 0xbf58476d1ce4e5b9ULL));
  h = mix64(h ^ (ctr + 0x94d049bb133111ebULL));
  return h;
}

}  // namespace rng_detail

class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

  uint64_t next_u64() { return rng_detail::keyed(seed_, stream_, ctr_++); }

  // uniform in (0, 1]
  double next_unit() {
    return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // standard complex Gaussian with E|c|^2 = 1 (polar form)
  std::complex<double> next_cgauss() {
    double u = next_unit();
    double t = 2.0 * M_PI * next_unit();
    double r = std::sqrt(-std::log(u));
    return {r * std::cos(t), r * std::sin(t)};
  }

  // standard real Gaussian (Box-Muller, one of the pair)
  double next_gauss() {
    double u = next_unit();
    double t = 2.0 * M_PI * next_unit();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(t);
  }

 private:
  uint64_t seed_, stream_;
  uint64_t ctr_ = 0;
};

}  // namespace critpt
