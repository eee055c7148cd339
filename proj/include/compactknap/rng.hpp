#ifndef COMPACTKNAP_RNG_HPP
#define COMPACTKNAP_RNG_HPP

#include <cstdint>

namespace compactknap {

/// SplitMix64 output mixer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * @brief Counter-based SplitMix64 stream.
 *
 * The i-th output of stream s under seed k is
 * mix(key(k, s) + (i + 1) * 0x9e3779b97f4a7c15), with
 * key(k, s) = mix(k ^ mix(s + 0x9e3779b97f4a7c15)). Each draw category gets
 * its own stream id, so adding draws to one category never shifts another.
 *
 * Normal variates use the Marsaglia polar method; the second value of each
 * accepted pair is cached and returned by the next call.
 */
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64_mix(seed ^ splitmix64_mix(stream + kGamma))) {}

  std::uint64_t next() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

  double normal(double mean, double stddev);

  std::uint64_t draws() const { return counter_; }

private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

} // namespace compactknap

#endif
