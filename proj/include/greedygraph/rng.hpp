#pragma once

#include <cmath>
#include <cstdint>

namespace greedygraph {

/// What a random stream is used for. Part of the stream key, so changing how
/// one purpose consumes randomness never perturbs another.
enum class StreamPurpose : std::uint64_t {
  kBirth = 1,      // which edges are birthed in a round
  kOrder = 2,      // birthtimes ordering a round's births
  kExact = 3,      // birthtimes of the one-shot process
  kSample = 4,     // edge samples for trajectory checks
  kTree = 5,       // branching-tree Monte Carlo
  kGnm = 6,        // uniform G(n, m) sampling
  kAcceptance = 7  // campaign-level draws in the acceptance suite
};

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the i-th output is mix64(key + (i+1) * golden).
///
/// Streams are keyed by (seed, trial, round, purpose), so every trial and
/// round can be regenerated on its own, in any order, on any thread.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr StreamRng(std::uint64_t key) : key_(key) {}

  static constexpr StreamRng for_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t round,
                                        StreamPurpose purpose) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ (trial + 0x3c6ef372fe94f82bULL));
    h = mix64(h ^ (round + 0xa54ff53a5f1d36f1ULL));
    h = mix64(h ^ (static_cast<std::uint64_t>(purpose) + 0x510e527fade682d1ULL));
    return StreamRng(h);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  constexpr std::uint64_t operator()() {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1].
  double uniform_pos() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % bound;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Visits, in increasing order, each index of [0, count) independently with
/// probability q, using geometric gaps. Cost is O(count * q + 1).
template <typename Visit>
void for_each_bernoulli(StreamRng& rng, std::uint64_t count, double q, Visit&& visit) {
  if (q <= 0.0 || count == 0) return;
  if (q >= 1.0) {
    for (std::uint64_t i = 0; i < count; ++i) visit(i);
    return;
  }
  const double log_fail = std::log1p(-q);
  std::uint64_t pos = 0;
  while (true) {
    const double gap = std::floor(std::log(rng.uniform_pos()) / log_fail);
    if (gap >= static_cast<double>(count - pos)) return;
    pos += static_cast<std::uint64_t>(gap);
    visit(pos);
    if (++pos >= count) return;
  }
}

/// Binomial(count, q) by sequential inversion; intended for small count * q.
inline std::uint64_t binomial_small_mean(StreamRng& rng, std::uint64_t count, double q) {
  if (q <= 0.0 || count == 0) return 0;
  if (q >= 1.0) return count;
  if (static_cast<double>(count) * q > 30.0) {
    std::uint64_t hits = 0;
    for_each_bernoulli(rng, count, q, [&](std::uint64_t) { ++hits; });
    return hits;
  }
  double u = rng.uniform();
  double pmf = std::exp(static_cast<double>(count) * std::log1p(-q));
  const double ratio = q / (1.0 - q);
  std::uint64_t j = 0;
  while (u >= pmf && j < count) {
    u -= pmf;
    pmf *= ratio * static_cast<double>(count - j) / static_cast<double>(j + 1);
    ++j;
  }
  return j;
}

}  // namespace greedygraph
