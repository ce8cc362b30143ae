#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace focinet {

/// Counter-based generator: output i is a pure function of (key, i), and the
/// key is derived from (seed, stream name, substream). Every subsystem draws
/// from its own named stream, so adding draws in one place never shifts the
/// numbers another subsystem sees.
///
/// Streams in use:
///   synth.init, synth.death, synth.birth, synth.move, synth.job,
///   synth.school, synth.migration, synth.income   (substream = year)
///   layer.neighborhood, layer.colleague            (substream = year, then container)
///   paths.sources, paths.targets, hocc.sample      (substream = 0)
///
/// All distributions are implemented here rather than taken from <random>,
/// whose distribution algorithms differ between standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::string_view stream, std::uint64_t substream = 0);

  /// Child generator keyed additionally by `id`; independent of this one's counter.
  CounterRng derive(std::uint64_t id) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound); unbiased. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  double lognormal(double mu, double sigma);

  /// In-place Fisher-Yates.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  /// `count` distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::uint64_t> sample_indices(std::uint64_t n, std::uint64_t count);

  std::uint64_t key() const { return key_; }

 private:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace focinet
