// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/computable.hpp"

#include <cmath>
#include <string>

namespace querysim {

ComputableReal ComputableReal::constant(double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw DomainError("computable real outside [0, 1]");
  ComputableReal r([value](unsigned) { return value; });
  r.exact_ = true;
  return r;
}

ComputableReal ComputableReal::ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0 || num > den) throw DomainError("ratio must lie in [0, 1]");
  if (num == den) return constant(1.0);
  return ComputableReal([num, den](unsigned n) {
    // floor(num 2^n / den) by binary long division; r < den throughout.
    std::uint64_t q = 0, r = num;
    for (unsigned i = 0; i < n; ++i) {
      const bool one = r >= den - r;
      q = (q << 1) | static_cast<std::uint64_t>(one);
      r = one ? r - (den - r) : r << 1;
    }
    return std::ldexp(static_cast<double>(q), -static_cast<int>(n));
  });
}

bool bernoulli_from_real(const ComputableReal& alpha, RandomTape& tape, unsigned max_steps) {
  if (max_steps > 64) max_steps = 64;
  std::uint64_t a = 0;  // A_n = a / 2^n
  for (unsigned n = 1; n <= max_steps; ++n) {
    a = (a << 1) | static_cast<std::uint64_t>(tape.bit());
    const long double width = std::ldexp(1.0L, -static_cast<int>(n));
    const long double lo = static_cast<long double>(a) * width;
    const long double hi = lo + width;
    const long double q = alpha.approximate(n);
    const long double err = alpha.error_bound(n);
    if (hi <= q - err) return true;
    if (lo >= q + err) return false;
  }
  throw PrecisionExhausted("no decision after " + std::to_string(max_steps) + " steps");
}

ComputablePmf<std::uint64_t> geometric_half_pmf() {
  return ComputablePmf<std::uint64_t>{
      [](std::size_t i) -> std::optional<std::uint64_t> { return i; },
      [](std::size_t i) {
        return ComputableReal::constant(i > 1000 ? 0.0 : std::ldexp(1.0, -static_cast<int>(i + 1)));
      }};
}

}  // namespace querysim
