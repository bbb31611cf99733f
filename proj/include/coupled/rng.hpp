#ifndef COUPLED_RNG_HPP
#define COUPLED_RNG_HPP

#include <cstdint>

#include "coupled/math.hpp"

namespace coupled {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kLaneSalt = 0xD1342543DE82EF95ull;

// Stafford "mix13" finalizer of SplitMix64 (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

/// Counter-based stream of pseudo-random numbers.
///
/// Output i of a stream is a pure function of (key, substream_id, i), so a
/// stream replayed from the same triple is bit-identical and streams with
/// distinct (key, substream_id) pairs are statistically independent. Draws
/// never touch shared state, which makes per-lane streams safe to advance
/// from any thread.
class RngStream {
 public:
  RngStream() : RngStream(0) {}

  explicit RngStream(std::uint64_t key, std::uint64_t substream_id = 0,
                     std::uint64_t counter = 0)
      : key_(key),
        substream_(substream_id),
        counter_(counter),
        base_(stream_base(key, substream_id)) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  std::uint64_t substream_id() const { return substream_; }

  std::uint64_t next_u64() {
    return detail::mix64(base_ + (++counter_) * detail::kGolden);
  }

  /// Uniform draw strictly inside (0, 1); safe to pass to log().
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw; consumes exactly one uniform.
  double normal() { return std_normal_quantile(uniform()); }

  /// Uniform index in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return k >= n ? n - 1 : k;
  }

 private:
  static std::uint64_t stream_base(std::uint64_t key, std::uint64_t sub) {
    return detail::mix64(key + detail::kGolden) ^
           detail::mix64((sub + 1) * detail::kLaneSalt);
  }

  std::uint64_t key_;
  std::uint64_t substream_;
  std::uint64_t counter_;
  std::uint64_t base_;
};

/// Child stream for lane `lane`, independent of the parent and of all other
/// lanes. Depends only on the parent identity (key, substream), never on how
/// far the parent has been advanced.
inline RngStream split_stream(const RngStream& parent, std::uint64_t lane) {
  std::uint64_t child_sub =
      detail::mix64(parent.substream_id() + (lane + 1) * detail::kGolden);
  return RngStream(parent.key(), child_sub);
}

}  // namespace coupled

#endif  // COUPLED_RNG_HPP
