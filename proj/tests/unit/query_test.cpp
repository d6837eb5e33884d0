// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <utility>

#include "querysim/finite_model.hpp"
#include "querysim/programs.hpp"
#include "querysim/query.hpp"
#include "querysim/record.hpp"

namespace querysim {
namespace {

using Coins = std::pair<bool, bool>;

GenerativeProgram<Coins> two_coins() {
  return make_program<Coins>([](RandomTape& t) {
    const bool a = t.bit();
    return Coins{a, t.bit()};
  });
}

TEST(FiniteModel, RejectsBadMass) {
  using M = FiniteModel<int, double>;
  EXPECT_THROW(M({{1, 0.5}, {2, 0.4}}), InvalidModel);
  EXPECT_THROW(M({{1, -0.1}, {2, 1.1}}), InvalidModel);
  EXPECT_THROW(M::from_weights({{1, 0.0}}), ZeroMassCondition);
  EXPECT_NO_THROW(M({{1, 0.25}, {2, 0.75}}));
}

TEST(FiniteModel, MapMergesImages) {
  auto m = FiniteModel<int, Rational>::uniform({1, 2, 3, 4});
  auto parity = m.map([](int x) { return x % 2; });
  EXPECT_EQ(parity.size(), 2u);
  EXPECT_EQ(parity.probability(0), Rational(1, 2));
}

TEST(FiniteModel, EnumeratePosteriorUniformConditioning) {
  // Divisible by 2, 3 and 5 within 1..180: the multiples of 30.
  const auto div = divisible_predicate({2, 3, 5});
  RandomTape unused(0);
  const auto post = enumerate_posterior(uniform_integer_model(180),
                                        [&](std::int64_t x) { return div(x, unused); });
  ASSERT_EQ(post.size(), 6u);
  for (std::int64_t x = 30; x <= 180; x += 30) EXPECT_EQ(post.probability(x), Rational(1, 6));
  EXPECT_EQ(post.probability(31), Rational(0));
}

TEST(FiniteModel, ZeroMassCondition) {
  auto m = FiniteModel<int, Rational>::uniform({1, 3, 5});
  EXPECT_THROW(enumerate_posterior(m, [](int x) { return x % 2 == 0; }), ZeroMassCondition);
}

TEST(Programs, UniformIntegerCoversRange) {
  RandomTape t = make_tape(3);
  const auto p = uniform_integer_program(180);
  Empirical<std::int64_t> emp;
  for (int i = 0; i < 180000; ++i) emp.add(run_program(p, t));
  EXPECT_EQ(emp.counts().size(), 180u);
  EXPECT_EQ(emp.counts().begin()->first, 1);
  EXPECT_EQ(emp.counts().rbegin()->first, 180);
  EXPECT_LT(total_variation(emp, uniform_integer_model(180)), 0.03);
}

TEST(Query, ConditionsOnTheEvent) {
  // P(first heads | at least one heads) = 2/3.
  QueryOptions opts;
  opts.samples = 60000;
  opts.seed = 17;
  const auto draws = query_samples(two_coins(), outcome_predicate<Coins>([](const Coins& c) {
                                     return c.first || c.second;
                                   }),
                                   opts);
  double first = 0;
  for (const auto& d : draws) first += d.value.first;
  EXPECT_NEAR(first / opts.samples, 2.0 / 3, 4 * std::sqrt(2.0 / 9 / opts.samples));
}

TEST(Query, UniformConditioningSampler) {
  QueryOptions opts;
  opts.samples = 30000;
  opts.seed = 180;
  const auto draws = query_samples(n180_program(), divisible_predicate({2, 3, 5}), opts);
  Empirical<std::int64_t> emp;
  double iterations = 0;
  for (const auto& d : draws) {
    emp.add(d.value);
    iterations += static_cast<double>(d.iterations);
  }
  RandomTape unused(0);
  const auto div = divisible_predicate({2, 3, 5});
  const auto exact = enumerate_posterior(uniform_integer_model(180),
                                         [&](std::int64_t x) { return div(x, unused); });
  EXPECT_LT(total_variation(emp, exact), 0.02);
  // Geometric with success 1/30: sd of the mean is sqrt(870 / n).
  EXPECT_NEAR(iterations / opts.samples, 30.0, 4 * std::sqrt(870.0 / opts.samples));
}

TEST(Query, Deterministic) {
  QueryOptions opts;
  opts.samples = 50;
  opts.seed = 5;
  const auto pred = divisible_predicate({3});
  const auto a = query_samples(n180_program(), pred, opts);
  const auto b = query_samples(n180_program(), pred, opts);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].value, b[i].value);
    EXPECT_EQ(a[i].iterations, b[i].iterations);
  }
  // Sample s runs on sub-tape s of the seed's tape.
  EXPECT_EQ(query_from(split_tape(make_tape(5), 0), n180_program(), pred, 1000).value, a[0].value);
  EXPECT_EQ(query(n180_program(), pred, opts), query(n180_program(), pred, opts));
}

TEST(Query, GivesUp) {
  QueryOptions opts;
  opts.max_iterations = 20;
  EXPECT_THROW(query(n180_program(), outcome_predicate<std::int64_t>([](std::int64_t x) { return x > 180; }),
                     opts),
               MaxIterationsExceeded);
  opts.max_iterations = 0;
  EXPECT_THROW(query(n180_program(), always_accept<std::int64_t>(), opts), DomainError);
}

TEST(Query, RepeatMultipliesAcceptance) {
  // A fair-coin predicate repeated k times accepts with 2^-k.
  const auto prog = make_program<int>([](RandomTape&) { return 0; });
  const Predicate<int> coin = [](const int&, RandomTape& t) { return t.bit(); };
  QueryOptions opts;
  opts.samples = 20000;
  opts.seed = 9;
  const auto draws = query_samples(prog, repeat_predicate<int>(3, coin), opts);
  double it = 0;
  for (const auto& d : draws) it += static_cast<double>(d.iterations);
  EXPECT_NEAR(it / opts.samples, 8.0, 4 * std::sqrt(56.0 / opts.samples));
}

TEST(Query, BitBudgetStopsRunawayPrograms) {
  const auto greedy = make_program<int>(
      [](RandomTape& t) {
        t.bits(16);
        return 0;
      },
      8);
  EXPECT_THROW(query(greedy, always_accept<int>()), BitBudgetExceeded);
}

TEST(Record, GetAndSet) {
  Record r{{"x", std::int64_t{4}}, {"flag", true}};
  r.set("x", std::int64_t{5}).set("y", 0.5);
  EXPECT_EQ(r.get<std::int64_t>("x"), 5);
  EXPECT_DOUBLE_EQ(r.get<double>("y"), 0.5);
  EXPECT_TRUE(r.has("flag"));
  EXPECT_THROW(r.get<double>("x"), DomainError);
  EXPECT_THROW(r.at("missing"), DomainError);
}

}  // namespace
}  // namespace querysim
