#ifndef TSMC_RANDOM_HPP
#define TSMC_RANDOM_HPP

#include <cstdint>
#include <string_view>

namespace tsmc {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of `text`. Stable across platforms; used to turn
/// experiment labels into stream identifiers.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based random stream.
///
/// The i-th output is a pure function of (key, i): `mix64(key + i * gamma)`.
/// Two streams with the same key produce identical sequences, and a stream
/// can be positioned anywhere by setting its counter.
class CounterStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  constexpr explicit CounterStream(std::uint64_t key) noexcept : key_{key} {}

  constexpr std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  constexpr double open_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Derives a stream key from an experiment seed, a chain index and a purpose tag.
constexpr std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t chain_index,
                                          std::uint64_t purpose) noexcept {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ mix64(chain_index + 0x3c6ef372fe94f82bULL) ^
               mix64(purpose * 0xa54ff53a5f1d36f1ULL + 1));
}

/// The randomness owned by a single chain.
///
/// `moves` drives the kernel dynamics; `clock` drives the number of base steps
/// taken by a time-sampled kernel. Keeping them separate means that wrapping
/// a kernel in a time-sampling law never shifts the base kernel's draws.
struct ChainRng {
  CounterStream moves;
  CounterStream clock;

  ChainRng(std::uint64_t seed, std::uint64_t chain_index) noexcept
      : moves{derive_stream_key(seed, chain_index, 1)},
        clock{derive_stream_key(seed, chain_index, 2)} {}
};

/// Standard normal quantile (Wichura's AS241, PPND16). Relative accuracy ~1e-16.
/// Requires 0 < p < 1.
double normal_quantile(double p) noexcept;

/// One standard normal draw from exactly one uniform of `stream`.
inline double standard_normal(CounterStream& stream) noexcept {
  return normal_quantile(stream.open_uniform());
}

}  // namespace tsmc

#endif  // TSMC_RANDOM_HPP
