// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "querysim/computable.hpp"

namespace querysim {
namespace {

TEST(ComputableReal, RatioApproximations) {
  const auto third = ComputableReal::ratio(1, 3);
  EXPECT_FALSE(third.is_exact());
  for (unsigned n = 1; n <= 52; ++n) {
    const double a = third.approximate(n);
    EXPECT_LE(a, 1.0 / 3);
    EXPECT_LE(1.0 / 3 - a, third.error_bound(n));
    EXPECT_EQ(std::ldexp(a, static_cast<int>(n)), std::floor(std::ldexp(a, static_cast<int>(n))));
  }
  EXPECT_EQ(third.approximate(2), 0.25);  // 0.01b
  EXPECT_EQ(ComputableReal::ratio(5, 7).approximate(3), 0.625);  // floor(40/7) / 8
  EXPECT_THROW(ComputableReal::ratio(4, 3), DomainError);
  EXPECT_THROW(ComputableReal::ratio(0, 0), DomainError);
  EXPECT_THROW(ComputableReal::constant(1.5), DomainError);
  EXPECT_TRUE(ComputableReal::constant(0.5).is_exact());
  EXPECT_EQ(ComputableReal::constant(0.5).error_bound(3), 0.0);
}

TEST(BernoulliFromReal, ExactlyCalibrated) {
  // Every tape of 16 bits either decides or runs out. The decided-true mass
  // and the undecided mass bracket P(true), which must contain 1/3.
  const auto third = ComputableReal::ratio(1, 3);
  const int len = 16;
  double yes = 0, open = 0;
  for (std::uint32_t w = 0; w < (1u << len); ++w) {
    std::vector<bool> bits;
    for (int i = len - 1; i >= 0; --i) bits.push_back(w >> i & 1);
    RandomTape t = RandomTape::from_bits(bits);
    try {
      yes += bernoulli_from_real(third, t);
    } catch (const TapeExhausted&) {
      open += 1;
    }
  }
  const double scale = std::ldexp(1.0, -len);
  EXPECT_LE(yes * scale, 1.0 / 3);
  EXPECT_GE((yes + open) * scale, 1.0 / 3);
  EXPECT_LT(open * scale, 1e-3);
}

TEST(BernoulliFromReal, FrequencyAndCost) {
  const auto third = ComputableReal::ratio(1, 3);
  RandomTape t = make_tape(3);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += bernoulli_from_real(third, t);
  EXPECT_NEAR(hits / double(n), 1.0 / 3, 4 * std::sqrt(2.0 / 9 / n));
  EXPECT_LT(static_cast<double>(t.cursor()) / n, 6.0);
}

TEST(BernoulliFromReal, DyadicConstant) {
  // 0.75 = 0.11b; the tape 10 gives U in [0.5, 0.75): true.
  RandomTape t = RandomTape::from_bits({true, false});
  EXPECT_TRUE(bernoulli_from_real(ComputableReal::constant(0.75), t));
  RandomTape u = RandomTape::from_bits({true, true});
  EXPECT_FALSE(bernoulli_from_real(ComputableReal::constant(0.75), u));
}

TEST(BernoulliFromReal, UndecidableTapeExhaustsPrecision) {
  // An inexact 1/2 against U = 0.0111...: every interval straddles the margin.
  const ComputableReal half([](unsigned) { return 0.5; });
  std::vector<bool> bits{false};
  bits.resize(40, true);
  RandomTape t = RandomTape::from_bits(bits);
  EXPECT_THROW(bernoulli_from_real(half, t, 20), PrecisionExhausted);
}

TEST(Countable, FiniteAtoms) {
  const auto pmf = ComputablePmf<int>::finite({{7, 0.2}, {8, 0.5}, {9, 0.3}});
  RandomTape t = make_tape(5);
  const int n = 60000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < n; ++i) ++counts[sample_countable(pmf, t) - 7];
  const double want[3] = {0.2, 0.5, 0.3};
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(counts[j] / double(n), want[j], 4 * std::sqrt(want[j] * (1 - want[j]) / n));
  }
}

TEST(Countable, Geometric) {
  RandomTape t = make_tape(6);
  const auto geo = geometric_half_pmf();
  const int n = 60000;
  std::vector<int> counts(5, 0);
  double mean = 0;
  for (int i = 0; i < n; ++i) {
    const auto v = sample_countable(geo, t);
    if (v < 5) ++counts[v];
    mean += static_cast<double>(v);
  }
  for (int j = 0; j < 5; ++j) {
    const double p = std::ldexp(1.0, -(j + 1));
    EXPECT_NEAR(counts[j] / double(n), p, 4 * std::sqrt(p * (1 - p) / n));
  }
  EXPECT_NEAR(mean / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(Countable, DefectivePmfErrors) {
  const auto pmf = ComputablePmf<int>::finite({{1, 0.0}, {2, 0.0}});
  RandomTape t = make_tape(1);
  EXPECT_THROW(sample_countable(pmf, t), PrecisionExhausted);
}

TEST(IntervalCondition, UniformPrior) {
  const auto prior = make_program<std::pair<double, double>>([](RandomTape& t) {
    const double u = t.uniform01();
    return std::make_pair(u, u);
  });
  QueryOptions opts;
  opts.samples = 20000;
  opts.seed = 2;
  const auto ys = interval_condition(prior, 0.5, 0.1, opts);
  double s = 0;
  for (double y : ys) {
    ASSERT_GT(y, 0.4);
    ASSERT_LT(y, 0.6);
    s += y;
  }
  // Uniform on (0.4, 0.6): sd 0.2 / sqrt(12).
  EXPECT_NEAR(s / opts.samples, 0.5, 4 * 0.2 / std::sqrt(12.0 * opts.samples));
  EXPECT_THROW(interval_condition(prior, 0.5, 0.0, opts), DomainError);
}

}  // namespace
}  // namespace querysim
