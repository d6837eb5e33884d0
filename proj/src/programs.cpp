// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/programs.hpp"

#include "querysim/errors.hpp"

namespace querysim {

GenerativeProgram<std::int64_t> uniform_integer_program(std::int64_t n) {
  if (n < 1) throw DomainError("range must be nonempty");
  return make_program<std::int64_t>([n](RandomTape& tape) {
    return static_cast<std::int64_t>(tape.uniform_int(static_cast<std::uint64_t>(n))) + 1;
  });
}

Predicate<std::int64_t> divisible_predicate(std::vector<std::int64_t> divisors) {
  for (auto d : divisors) {
    if (d == 0) throw DomainError("divisor must be nonzero");
  }
  return outcome_predicate<std::int64_t>([divisors = std::move(divisors)](std::int64_t x) {
    for (auto d : divisors) {
      if (x % d != 0) return false;
    }
    return true;
  });
}

FiniteModel<std::int64_t, Rational> uniform_integer_model(std::int64_t n) {
  if (n < 1) throw DomainError("range must be nonempty");
  std::vector<std::int64_t> support;
  support.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) support.push_back(i);
  return FiniteModel<std::int64_t, Rational>::uniform(support);
}

}  // namespace querysim
