#ifndef COMPACTKNAP_INSTGEN_HPP
#define COMPACTKNAP_INSTGEN_HPP

#include <cstdint>

#include "compactknap/instance.hpp"

namespace compactknap {

/// Parameters drawn while generating a two-peak instance. Peaks are 1-based.
struct GenParams {
  int n = 0;
  std::uint64_t seed = 0;
  int k = 8;
  double p = 0.8;
  int delta = 1;
  int peak1 = 1;
  int peak2 = 1;
};

/// Stream ids of the generator, one per draw category.
enum class GenStream : std::uint64_t {
  Peaks = 1,
  Spread = 2,
  Histogram1 = 3,
  Histogram2 = 4,
  Costs = 5,
  Proportion = 6,
  Delta = 7,
};

inline constexpr int kSamplesPerPeak = 5000;

/**
 * @brief Deterministic two-peak hard instance of size n.
 *
 * Weights are raw histogram counts of two batches of 5000 normal samples
 * rounded to the nearest index; out-of-range peaks are redrawn, out-of-range
 * samples are dropped. Costs are uniform on [1, 6], q = p * sum(w) with
 * p ~ U(0.65, 0.95), delta uniform on {1, 2, 3, 4}. The drawn parameters are
 * stored in meta.
 *
 * Throws std::invalid_argument when n < 4.
 */
Instance generate_instance(int n, std::uint64_t seed);

/// The parameters generate_instance() draws for (n, seed).
GenParams draw_params(int n, std::uint64_t seed);

/// Counter-example family: n = 2m, heavy extremes, unit costs, q = 4m + 2,
/// delta = 2. Throws std::invalid_argument when m < 2.
Instance build_ce(int m);

} // namespace compactknap

#endif
