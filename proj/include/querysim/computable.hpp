// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "querysim/errors.hpp"
#include "querysim/query.hpp"
#include "querysim/tape.hpp"

namespace querysim {

/// Approximations are honored up to this index; finer requests reuse it.
inline constexpr unsigned kRealPrecision = 52;
inline constexpr unsigned kDefaultMaxSteps = 64;

/*!
 * A real r in [0, 1] given by approximations q_n with |q_n - r| <= err(n),
 * where err(n) = 2^-n in general and 0 for reals known exactly as doubles.
 */
class ComputableReal {
 public:
  using Approximator = std::function<double(unsigned)>;

  explicit ComputableReal(Approximator approx) : approx_(std::move(approx)) {}

  /// Exact dyadic value (any double is one).
  static ComputableReal constant(double value);

  /// num / den, approximated by floor(num 2^n / den) 2^-n.
  static ComputableReal ratio(std::uint64_t num, std::uint64_t den);

  double approximate(unsigned n) const { return approx_(n < kRealPrecision ? n : kRealPrecision); }

  /// Guaranteed bound on |approximate(n) - r|.
  double error_bound(unsigned n) const {
    return exact_ ? 0.0 : std::ldexp(1.0, -static_cast<int>(n < kRealPrecision ? n : kRealPrecision));
  }

  bool is_exact() const noexcept { return exact_; }

 private:
  Approximator approx_;
  bool exact_ = false;
};

/*!
 * Exact Bernoulli(alpha) from fair bits. Step n reads bit R_n, forms
 * A_n = sum_{i<=n} R_i 2^-i and compares the interval [A_n, A_n + 2^-n]
 * holding the infinite expansion against [q_n - err, q_n + err]; it answers
 * once they are disjoint. PrecisionExhausted after `max_steps` bits.
 */
bool bernoulli_from_real(const ComputableReal& alpha, RandomTape& tape,
                         unsigned max_steps = kDefaultMaxSteps);

/// Support enumeration t_0, t_1, ... (nullopt past the end) and atom probabilities.
template <class T>
struct ComputablePmf {
  std::function<std::optional<T>(std::size_t)> atom;
  std::function<ComputableReal(std::size_t)> probability;

  static ComputablePmf finite(std::vector<std::pair<T, double>> atoms) {
    auto shared = std::make_shared<const std::vector<std::pair<T, double>>>(std::move(atoms));
    return ComputablePmf{
        [shared](std::size_t i) -> std::optional<T> {
          if (i >= shared->size()) return std::nullopt;
          return (*shared)[i].first;
        },
        [shared](std::size_t i) {
          return ComputableReal::constant(i < shared->size() ? (*shared)[i].second : 0.0);
        }};
  }
};

/// Geometric(1/2) on {0, 1, 2, ...}: P(i) = 2^-(i+1).
ComputablePmf<std::uint64_t> geometric_half_pmf();

/// Number of support atoms visited before giving up.
inline constexpr std::size_t kDefaultMaxAtoms = std::size_t{1} << 20;

/*!
 * Walks the support: t_n is emitted with probability
 * nu{t_n} / (1 - nu{t_0..t_{n-1}}), else the walk moves on. The residual
 * ratio is clamped to [0, 1]; a ratio within 1e-12 of 1 is treated as 1 so
 * float rounding cannot push a finite walk off the end of its support.
 */
template <class T>
T sample_countable(const ComputablePmf<T>& pmf, RandomTape& tape,
                   std::size_t max_atoms = kDefaultMaxAtoms,
                   unsigned max_steps = kDefaultMaxSteps) {
  double consumed = 0.0;
  for (std::size_t n = 0; n < max_atoms; ++n) {
    std::optional<T> t = pmf.atom(n);
    if (!t) break;
    const double p = pmf.probability(n).approximate(kRealPrecision);
    const double rest = 1.0 - consumed;
    consumed += p;
    if (p <= 0.0) continue;
    double ratio = rest > 0.0 ? p / rest : 1.0;
    if (ratio > 1.0 - 1e-12) ratio = 1.0;
    if (bernoulli_from_real(ComputableReal::constant(ratio), tape, max_steps)) return std::move(*t);
  }
  throw PrecisionExhausted("support enumeration exhausted without emitting an atom");
}

/*!
 * QUERY over a prior emitting (X, Y), accepting iff |X - x| < epsilon. The
 * result is also the posterior on Y given X + noise = x with noise uniform on
 * [-epsilon, epsilon]. Returns opts.samples draws of Y.
 */
template <class Y>
std::vector<Y> interval_condition(const GenerativeProgram<std::pair<double, Y>>& prior, double x,
                                  double epsilon, const QueryOptions& opts) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const Predicate<std::pair<double, Y>> near = [x, epsilon](const std::pair<double, Y>& v,
                                                            RandomTape&) {
    return std::abs(v.first - x) < epsilon;
  };
  std::vector<Y> out;
  out.reserve(opts.samples);
  for (auto& draw : query_samples(prior, near, opts)) out.push_back(std::move(draw.value.second));
  return out;
}

}  // namespace querysim
