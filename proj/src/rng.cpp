#include "focinet/rng.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace focinet {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

CounterRng::CounterRng(std::uint64_t seed, std::string_view stream, std::uint64_t substream)
    : key_(mix64(mix64(seed + kGolden) ^ fnv1a(stream)) ^ mix64(substream * kGolden + 1)) {}

CounterRng CounterRng::derive(std::uint64_t id) const { return CounterRng(mix64(key_ ^ mix64(id + kGolden))); }

std::uint64_t CounterRng::next() {
  std::uint64_t c = counter_++;
  return mix64(key_ + mix64(c * kGolden + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = next();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = next();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double CounterRng::normal() {
  // Box-Muller, one variate per call.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

std::vector<std::uint64_t> CounterRng::sample_indices(std::uint64_t n, std::uint64_t count) {
  if (count > n) count = n;
  std::vector<std::uint64_t> out;
  out.reserve(count);
  if (count * 3 >= n) {
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint64_t i = 0; i < count; ++i) {
      std::uint64_t j = i + below(n - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
  // Sparse partial Fisher-Yates: same draws as the dense version.
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto at = [&](std::uint64_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t j = i + below(n - i);
    std::uint64_t vi = at(i);
    std::uint64_t vj = at(j);
    swapped[j] = vi;
    swapped[i] = vj;
    out.push_back(vj);
  }
  return out;
}

}  // namespace focinet
