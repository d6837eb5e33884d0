// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/tape.hpp"

#include <bit>
#include <string>

#include "querysim/errors.hpp"

namespace querysim {

RandomTape RandomTape::from_bits(std::vector<bool> bits, std::uint64_t seed) {
  RandomTape tape(seed);
  tape.finite_ = std::make_shared<const std::vector<bool>>(std::move(bits));
  return tape;
}

std::vector<bool> RandomTape::consumed() const {
  std::vector<bool> out;
  out.reserve(cursor_);
  if (finite_) {
    out.assign(finite_->begin(), finite_->begin() + static_cast<std::ptrdiff_t>(cursor_));
    return out;
  }
  for (std::uint64_t i = 0; i < cursor_; ++i) {
    const std::uint64_t word = mix64(seed_ + ((i >> 6) + 1) * kGoldenGamma);
    out.push_back((word >> (63u - (i & 63u))) & 1u);
  }
  return out;
}

bool RandomTape::finite_bit() {
  if (cursor_ >= finite_->size()) {
    throw TapeExhausted("finite tape of " + std::to_string(finite_->size()) +
                        " bits read past its end");
  }
  return (*finite_)[cursor_++];
}

void RandomTape::throw_budget() const {
  throw BitBudgetExceeded("program exceeded its bit budget at bit " + std::to_string(cursor_));
}

std::uint64_t RandomTape::bits(unsigned count) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < count; ++i) v = (v << 1) | static_cast<std::uint64_t>(bit());
  return v;
}

std::uint64_t RandomTape::uniform_int(std::uint64_t n) {
  if (n <= 1) return 0;
  const unsigned width = static_cast<unsigned>(std::bit_width(n - 1));
  for (;;) {
    const std::uint64_t v = bits(width);
    if (v < n) return v;
  }
}

double RandomTape::uniform01() {
  return static_cast<double>(bits(53)) * 0x1.0p-53;
}

bool RandomTape::bernoulli(double p) {
  if (!(p > 0.0)) return false;
  if (p >= 1.0) return true;
  // Walk the binary expansions of U (from the tape) and p until they differ.
  for (;;) {
    p *= 2.0;
    const bool p_bit = p >= 1.0;
    if (p_bit) p -= 1.0;
    const bool u_bit = bit();
    if (u_bit != p_bit) return p_bit;  // U < p iff p has the 1 where U has 0
    if (p == 0.0) return false;        // U >= p from here on
  }
}

}  // namespace querysim
