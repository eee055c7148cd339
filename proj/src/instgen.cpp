#include "compactknap/instgen.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "compactknap/rng.hpp"

namespace compactknap {

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("below() needs a positive bound");
  }
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t v = next();
    if (v < limit) {
      return v % bound;
    }
  }
}

double CounterRng::normal(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return mean + stddev * u * factor;
}

namespace {

CounterRng stream(std::uint64_t seed, GenStream s) {
  return CounterRng(seed, static_cast<std::uint64_t>(s));
}

int draw_peak(CounterRng &rng, int n, double mean) {
  for (;;) {
    const long peak = std::lround(rng.normal(mean, n / 6.0));
    if (peak >= 1 && peak <= n) {
      return static_cast<int>(peak);
    }
  }
}

void add_histogram(CounterRng &rng, int n, int peak, double stddev,
                   std::vector<Weight> &counts) {
  for (int s = 0; s < kSamplesPerPeak; ++s) {
    const long index = std::lround(rng.normal(peak, stddev));
    if (index >= 1 && index <= n) {
      ++counts[static_cast<std::size_t>(index - 1)];
    }
  }
}

} // namespace

GenParams draw_params(int n, std::uint64_t seed) {
  if (n < 4) {
    throw std::invalid_argument("generate_instance requires n >= 4");
  }
  GenParams params;
  params.n = n;
  params.seed = seed;

  CounterRng peaks = stream(seed, GenStream::Peaks);
  params.peak1 = draw_peak(peaks, n, n / 3.0);
  params.peak2 = draw_peak(peaks, n, 2.0 * n / 3.0);

  static constexpr std::array<int, 3> kSpreads{8, 16, 32};
  CounterRng spread = stream(seed, GenStream::Spread);
  params.k = kSpreads[spread.below(kSpreads.size())];

  CounterRng proportion = stream(seed, GenStream::Proportion);
  params.p = proportion.uniform(0.65, 0.95);

  CounterRng delta = stream(seed, GenStream::Delta);
  params.delta = 1 + static_cast<int>(delta.below(4));
  return params;
}

Instance generate_instance(int n, std::uint64_t seed) {
  const GenParams params = draw_params(n, seed);
  const double stddev = n / (2.0 * params.k);

  std::vector<Weight> weights(static_cast<std::size_t>(n), 0);
  CounterRng hist1 = stream(seed, GenStream::Histogram1);
  add_histogram(hist1, n, params.peak1, stddev, weights);
  CounterRng hist2 = stream(seed, GenStream::Histogram2);
  add_histogram(hist2, n, params.peak2, stddev, weights);

  std::vector<double> costs(static_cast<std::size_t>(n));
  CounterRng cost_rng = stream(seed, GenStream::Costs);
  for (double &c : costs) {
    c = cost_rng.uniform(1.0, 6.0);
  }

  Weight total = 0;
  for (Weight w : weights) {
    total += w;
  }
  const double q = params.p * static_cast<double>(total);

  nlohmann::json meta = {
      {"generator", "two-peak"},
      {"seed", seed},
      {"scale", static_cast<double>(total)},
      {"k", params.k},
      {"p", params.p},
      {"peak1", params.peak1},
      {"peak2", params.peak2},
      {"rng", "splitmix64-counter/polar-normal"},
  };
  return Instance(std::move(weights), std::move(costs), q, params.delta,
                  std::move(meta));
}

Instance build_ce(int m) {
  if (m < 2) {
    throw std::invalid_argument("build_ce requires m >= 2");
  }
  const int n = 2 * m;
  std::vector<Weight> weights(static_cast<std::size_t>(n), 1);
  weights.front() = 2 * m + 1;
  weights.back() = 2 * m + 1;
  std::vector<double> costs(static_cast<std::size_t>(n), 1.0);
  nlohmann::json meta = {{"generator", "ce"}, {"m", m}};
  return Instance(std::move(weights), std::move(costs), 4.0 * m + 2.0, 2,
                  std::move(meta));
}

} // namespace compactknap
