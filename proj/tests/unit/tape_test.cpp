// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "querysim/errors.hpp"
#include "querysim/tape.hpp"

namespace querysim {
namespace {

TEST(Tape, SameSeedSameBits) {
  RandomTape a = make_tape(99), b = make_tape(99);
  for (int i = 0; i < 500; ++i) ASSERT_EQ(a.bit(), b.bit()) << "bit " << i;
}

TEST(Tape, FirstWordIsSplitMixOutput) {
  // Published SplitMix64 first output for seed 0.
  EXPECT_EQ(mix64(0 + kGoldenGamma), 0xe220a8397b1dcdafull);
  RandomTape t = make_tape(0);
  EXPECT_EQ(t.bits(64), 0xe220a8397b1dcdafull);
}

TEST(Tape, ConsumedReplaysTheStream) {
  RandomTape t = make_tape(5);
  std::vector<bool> read;
  for (int i = 0; i < 130; ++i) read.push_back(t.bit());
  EXPECT_EQ(t.consumed(), read);
  EXPECT_EQ(t.cursor(), 130u);
  t.rewind();
  for (int i = 0; i < 130; ++i) ASSERT_EQ(t.bit(), read[i]);
}

TEST(Tape, SplitIgnoresCursor) {
  RandomTape t = make_tape(11);
  const RandomTape before = split_tape(t, 3);
  t.bits(40);
  RandomTape after = split_tape(t, 3);
  RandomTape b = before;
  EXPECT_EQ(b.bits(64), after.bits(64));
  RandomTape other = split_tape(t, 4);
  RandomTape again = split_tape(t, 3);
  EXPECT_NE(other.bits(64), again.bits(64));
}

TEST(Tape, FiniteTapeRunsOut) {
  RandomTape t = RandomTape::from_bits({true, false});
  EXPECT_TRUE(t.bit());
  EXPECT_FALSE(t.bit());
  EXPECT_THROW(t.bit(), TapeExhausted);
}

TEST(Tape, BitBudget) {
  RandomTape t = make_tape(1);
  t.set_bit_limit(3);
  t.bits(3);
  EXPECT_THROW(t.bit(), BitBudgetExceeded);
}

TEST(Tape, BernoulliComparesExpansions) {
  // p = 0.25 = 0.01b: U < p iff the tape starts 00.
  RandomTape a = RandomTape::from_bits({false, false});
  EXPECT_TRUE(a.bernoulli(0.25));
  RandomTape b = RandomTape::from_bits({false, true});
  EXPECT_FALSE(b.bernoulli(0.25));
  RandomTape c = RandomTape::from_bits({true});
  EXPECT_FALSE(c.bernoulli(0.25));
  EXPECT_EQ(c.cursor(), 1u);
  RandomTape none = RandomTape::from_bits({});
  EXPECT_TRUE(none.bernoulli(1.0));
  EXPECT_FALSE(none.bernoulli(0.0));
}

TEST(Tape, BernoulliFrequency) {
  RandomTape t = make_tape(2024);
  const int n = 200000;
  for (double p : {0.1, 0.37, 0.5, 0.9}) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += t.bernoulli(p);
    const double sigma = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(hits) / n, p, 4 * sigma) << p;
  }
}

TEST(Tape, UniformIntIsUniform) {
  RandomTape t = make_tape(7);
  const int n = 120000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < n; ++i) ++counts[t.uniform_int(6)];
  for (int c : counts) EXPECT_NEAR(c / double(n), 1.0 / 6, 4 * std::sqrt(5.0 / 36 / n));
  RandomTape z = RandomTape::from_bits({});
  EXPECT_EQ(z.uniform_int(1), 0u);
}

TEST(Tape, Uniform01Moments) {
  RandomTape t = make_tape(8);
  const int n = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = t.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3, 0.005);
}

}  // namespace
}  // namespace querysim
