#pragma once

/// \file rng.hpp
/// Counter-based random number generation. Every draw is a pure hash of
/// (seed, stream, counter), so ensembles sampled in parallel are bit-identical
/// to serial runs regardless of scheduling, and any atom's stream can be
/// regenerated in isolation.

#include <cmath>
#include <cstdint>

namespace cloudshape {

namespace detail {

/// Finalizer of the splitmix64 generator; bijective with full avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (stream + 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ (counter + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

}  // namespace detail

/// Inverse of the standard normal CDF (Wichura's PPND16 rational
/// approximations), accurate to ~1e-15 over p in (0,1).
double inverse_normal_cdf(double p);

/// One independent random stream, identified by (seed, stream id). Draws
/// advance an internal counter; the k-th draw of a given stream is a pure
/// function of (seed, stream, k).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {}

  /// Uniform double in the open interval (0,1).
  double uniform() {
    const std::uint64_t h = detail::hash3(seed_, stream_, counter_++);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal deviate via inverse-CDF sampling (no rejection, so the
  /// draw count per call is always exactly one).
  double normal() { return inverse_normal_cdf(uniform()); }

  /// Poisson deviate with mean lambda >= 0. Uses Knuth's product method for
  /// small means and Hormann's transformed rejection (PTRS) for large ones;
  /// both consume a variable number of draws from this stream only.
  std::uint64_t poisson(double lambda);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace cloudshape
