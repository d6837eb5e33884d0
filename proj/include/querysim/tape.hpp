// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace querysim {

/// SplitMix64 output finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

/// Default per-program bit budget (2^20 bits).
inline constexpr std::uint64_t kDefaultBitBudget = std::uint64_t{1} << 20;

/*!
 * A replayable stream of fair random bits; the only source of randomness in
 * the library.
 *
 * A seeded tape is counter based: word i of the stream is
 * mix64(seed + (i + 1) * golden_gamma), i.e. the SplitMix64 sequence started
 * at `seed`, and bits are taken most-significant first. Bit j is therefore a
 * pure function of (seed, j), which makes replay and `consumed()` free.
 *
 * A tape may instead be built from an explicit finite bit string; reading
 * past its end raises TapeExhausted.
 *
 * Tapes are values. A tape being read belongs to one task at a time; fan-out
 * goes through `split`, never through a shared cursor.
 */
class RandomTape {
 public:
  explicit RandomTape(std::uint64_t seed) noexcept : seed_(seed) {}

  /// Tape whose content is exactly `bits`, then nothing.
  static RandomTape from_bits(std::vector<bool> bits, std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t cursor() const noexcept { return cursor_; }
  bool is_finite() const noexcept { return finite_ != nullptr; }

  /// Bits read so far, in order.
  std::vector<bool> consumed() const;

  /// Reposition at bit 0 (the budget is kept).
  void rewind() noexcept {
    cursor_ = 0;
    word_index_ = kNoWord;
  }

  /// Reads past absolute position `limit` raise BitBudgetExceeded.
  void set_bit_limit(std::uint64_t limit) noexcept { limit_ = limit; }
  std::uint64_t bit_limit() const noexcept { return limit_; }

  bool bit() {
    if (cursor_ >= limit_) throw_budget();
    if (finite_) return finite_bit();
    const std::uint64_t idx = cursor_ >> 6;
    if (idx != word_index_) {
      word_ = mix64(seed_ + (idx + 1) * kGoldenGamma);
      word_index_ = idx;
    }
    const unsigned shift = 63u - static_cast<unsigned>(cursor_ & 63u);
    ++cursor_;
    return (word_ >> shift) & 1u;
  }

  /// `count` bits (count <= 64) packed big-endian into an integer.
  std::uint64_t bits(unsigned count);

  /// Exactly uniform on {0, ..., n-1} by rejection over ceil(log2 n) bits.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Dyadic uniform: 53 bits b_1..b_53 read as sum b_i 2^-i.
  double uniform01();

  /*!
   * Exact Bernoulli(p) for a double p by lazily comparing the tape's binary
   * expansion with p's (p is a dyadic rational, so the comparison is exact).
   * p <= 0 and p >= 1 consume no bits. Expected cost is two bits.
   */
  bool bernoulli(double p);

 private:
  static constexpr std::uint64_t kNoWord = std::numeric_limits<std::uint64_t>::max();

  bool finite_bit();
  [[noreturn]] void throw_budget() const;

  std::uint64_t seed_;
  std::uint64_t cursor_ = 0;
  std::uint64_t limit_ = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t word_ = 0;
  std::uint64_t word_index_ = kNoWord;
  std::shared_ptr<const std::vector<bool>> finite_;
};

/// Fresh tape at bit 0; a deterministic function of `seed`.
inline RandomTape make_tape(std::uint64_t seed) noexcept { return RandomTape(seed); }

/// Seed of the `iteration`-th child stream of `parent_seed`.
constexpr std::uint64_t split_seed(std::uint64_t parent_seed, std::uint64_t iteration) noexcept {
  return mix64(mix64(parent_seed ^ 0xd1b54a32d192ed03ull) + (iteration + 1) * kGoldenGamma);
}

/*!
 * Independent sub-tape number `iteration` of `parent`. Depends only on the
 * parent's seed, never on its cursor, so sub-tapes can be drawn in any order.
 */
inline RandomTape split_tape(const RandomTape& parent, std::uint64_t iteration) noexcept {
  return RandomTape(split_seed(parent.seed(), iteration));
}

}  // namespace querysim
