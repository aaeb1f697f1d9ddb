#ifndef CTMC_ACF_RANDOM_HPP
#define CTMC_ACF_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace ctmc {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: the k-th draw is mix64(key + (k + 1) * gamma), so a
/// stream is fully determined by its key and independent of scheduling.
/// Keys for substreams are derived by hashing (master seed, stream index).
class CounterRng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr CounterRng substream(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return CounterRng(mix64(mix64(master_seed) ^ mix64(index + kGamma)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
  }

  /// Uniform on (0, 1): 53 random bits, never exactly 0.
  double uniform_open() noexcept { return (double((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Exponential(rate) by inversion.
  double exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ctmc

#endif  // CTMC_ACF_RANDOM_HPP
