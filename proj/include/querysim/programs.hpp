// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "querysim/finite_model.hpp"
#include "querysim/query.hpp"

namespace querysim {

/// Uniform integer in [1, n], via exact rejection on ceil(log2 n) bits.
GenerativeProgram<std::int64_t> uniform_integer_program(std::int64_t n);

/// N180: uniform on {1, ..., 180}.
inline GenerativeProgram<std::int64_t> n180_program() { return uniform_integer_program(180); }

/// Accepts iff the outcome is divisible by every listed divisor.
Predicate<std::int64_t> divisible_predicate(std::vector<std::int64_t> divisors);

/// Exact uniform law on {1, ..., n} with rational weights.
FiniteModel<std::int64_t, Rational> uniform_integer_model(std::int64_t n);

}  // namespace querysim
