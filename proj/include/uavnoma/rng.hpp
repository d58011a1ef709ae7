#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace uavnoma {

// Philox4x32-10 block function.
struct Philox4x32 {
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  static counter_type block(counter_type ctr, key_type key) {
    constexpr std::uint64_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = m0 * ctr[0];
      const std::uint64_t p1 = m1 * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += w0;
      key[1] += w1;
    }
    return ctr;
  }
};

// Roles keep the draws of one trial in separate sub-streams, so that
// changing how one quantity is sampled never shifts another.
enum class StreamRole : std::uint32_t {
  placement = 0,
  interference_near = 1,
  interference_far = 2,
  fading_fast = 3,
  lemma = 4,
  alignment = 16,  // + resample attempt
};

// Counter-based stream keyed by (seed, trial, role). Satisfies
// UniformRandomBitGenerator, so the standard distributions work on it.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t role)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0u, role, static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)} {}

  CounterStream(std::uint64_t seed, std::uint64_t trial, StreamRole role, std::uint32_t offset = 0)
      : CounterStream(seed, trial, static_cast<std::uint32_t>(role) + offset) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 2) refill();
    const std::size_t i = 2 * pos_++;
    return (static_cast<std::uint64_t>(buf_[i]) << 32) | buf_[i + 1];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

 private:
  void refill() {
    buf_ = Philox4x32::block(ctr_, key_);
    ++ctr_[0];
    pos_ = 0;
  }

  Philox4x32::key_type key_;
  Philox4x32::counter_type ctr_;
  Philox4x32::counter_type buf_{};
  std::size_t pos_ = 2;
};

}  // namespace uavnoma
