// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "querysim/bundled.hpp"
#include "querysim/decision.hpp"
#include "querysim/model_io.hpp"

namespace querysim {
namespace {

BeliefStateModel fig4() { return parse_belief_model(bundled::fig4_model()); }

std::size_t idx(const BeliefStateModel& m, const char* name) { return *m.index_of(name); }

TEST(Choice, ClosedForms) {
  // rho = 2, k = 2: 4 / 5.
  EXPECT_NEAR(multiplicative_choice_probability(0.6, 0.3, 2), 0.8, 1e-15);
  // alpha = 0.3: 1 / (1 + (0.7 / 1.3)).
  EXPECT_NEAR(additive_choice_probability(0.6, 0.3, 1), 1.0 / (1.0 + 0.7 / 1.3), 1e-15);
  EXPECT_NEAR(additive_choice_probability(0.6, 0.3, 1), 0.65, 1e-15);
  EXPECT_DOUBLE_EQ(multiplicative_choice_probability(0.5, 0.5, 4), 0.5);
}

TEST(Choice, SamplerMatchesClosedForm) {
  for (auto rule : {ChoiceRule::kMultiplicative, ChoiceRule::kAdditive}) {
    for (std::uint64_t k : {1u, 3u}) {
      QueryOptions opts;
      opts.samples = 20000;
      opts.seed = 100 + k;
      const double f = choice_frequency(rule, ActionSimulator::bernoulli(0.7), ActionSimulator::bernoulli(0.4),
                                        k, opts);
      const double want = rule == ChoiceRule::kMultiplicative ? multiplicative_choice_probability(0.7, 0.4, k)
                                                              : additive_choice_probability(0.7, 0.4, k);
      EXPECT_NEAR(f, want, 4 * std::sqrt(want * (1 - want) / opts.samples));
    }
  }
}

TEST(Choice, SingleDraws) {
  QueryOptions opts;
  opts.seed = 4;
  const auto sure = ActionSimulator::bernoulli(1.0), never = ActionSimulator::bernoulli(0.0);
  EXPECT_EQ(choose_multiplicative(sure, never, 3, opts), kChooseX);
  EXPECT_EQ(choose_additive(never, sure, 3, opts), kChooseY);
  EXPECT_THROW(ActionSimulator::bernoulli(1.5), DomainError);
}

TEST(Policy, Fig4GoldenValues) {
  const auto m = fig4();
  const auto sol = solve_policy(m, Amplification::power(1));
  const auto neg = idx(m, "negative"), pos = idx(m, "positive"), start = idx(m, "start");
  // Hand-computed from the edge table: q(WAIT | negative) = 0.91, q(INJECT | negative) = 0.275, ...
  EXPECT_NEAR(sol.policy.probs[neg][0], 0.91 / (0.91 + 0.275), 1e-12);
  EXPECT_NEAR(sol.policy.probs[pos][0], 0.19 / (0.19 + 0.875), 1e-12);
  const double v_neg = (0.91 * 0.91 + 0.275 * 0.275) / 1.185;
  const double v_pos = (0.19 * 0.19 + 0.875 * 0.875) / 1.065;
  EXPECT_NEAR(sol.success[neg], v_neg, 1e-12);
  EXPECT_NEAR(sol.success[pos], v_pos, 1e-12);
  const double q_test = 0.5 * v_pos + 0.5 * v_neg;
  EXPECT_NEAR(sol.action_success[start][0], q_test, 1e-12);
  const double z = q_test + 0.55 + 0.575;
  EXPECT_NEAR(sol.policy.probs[start][0], q_test / z, 1e-12);
  // Frozen.
  EXPECT_NEAR(sol.policy.probs[neg][0], 0.767932, 1e-6);
  EXPECT_NEAR(sol.policy.probs[pos][0], 0.178404, 1e-6);
  EXPECT_NEAR(sol.success[neg], 0.762637, 1e-6);
  EXPECT_NEAR(sol.success[pos], 0.752793, 1e-6);
  EXPECT_NEAR(q_test, 0.757715, 1e-6);
  EXPECT_NEAR(sol.policy.probs[start][0], 0.402459, 1e-6);
  EXPECT_NEAR(sol.policy.probs[start][1], 0.292131, 1e-6);
  EXPECT_NEAR(sol.policy.probs[start][2], 0.305410, 1e-6);
}

TEST(Policy, ArgmaxSelects) {
  const auto m = fig4();
  const auto sol = solve_policy(m, Amplification::limit());
  auto chosen = [&](const char* s) {
    const auto b = idx(m, s);
    for (std::size_t z = 0; z < sol.policy.probs[b].size(); ++z) {
      if (sol.policy.probs[b][z] == 1.0) return m.state(b).actions[z].name;
    }
    return std::string("?");
  };
  EXPECT_EQ(chosen("start"), "TEST");
  EXPECT_EQ(chosen("positive"), "INJECT");
  EXPECT_EQ(chosen("negative"), "WAIT");
}

TEST(Policy, LargeKApproachesArgmax) {
  const auto m = fig4();
  const auto sol = solve_policy(m, Amplification::power(64));
  EXPECT_GT(sol.policy.probs[idx(m, "positive")][1], 0.999);
}

TEST(Policy, SingleActionIsCertain) {
  std::vector<BeliefState> s(3);
  s[0] = {"go", Terminal::kNone, {{"ONLY", {{1, 0.3}, {2, 0.7}}}}};
  s[1] = {"win", Terminal::kSuccess, {}};
  s[2] = {"lose", Terminal::kFailure, {}};
  const BeliefStateModel m(s);
  for (auto amp : {Amplification::power(1), Amplification::power(5), Amplification::limit()}) {
    const auto sol = solve_policy(m, amp);
    EXPECT_EQ(sol.policy.probs[0], std::vector<double>{1.0});
    EXPECT_NEAR(sol.success[0], 0.3, 1e-15);
  }
}

TEST(Policy, OutcomeFrequencyMatchesSuccessProb) {
  const auto m = fig4();
  const auto pi = StochasticPolicy::uniform(m);
  RandomTape t = make_tape(8);
  const int n = 40000;
  int wins = 0;
  for (int i = 0; i < n; ++i) wins += outcome(m, m.root(), pi, t);
  const double v = success_prob(m, m.root(), pi);
  EXPECT_NEAR(wins / double(n), v, 4 * std::sqrt(v * (1 - v) / n));
}

TEST(Policy, ActSampleMatchesAct) {
  const auto m = fig4();
  const auto pi = solve_policy(m, Amplification::power(2)).policy;
  const auto want = act(m, m.root(), pi, Amplification::power(2));
  QueryOptions opts;
  opts.samples = 20000;
  opts.seed = 21;
  const auto got = act_sample_frequencies(m, m.root(), pi, 2, opts);
  for (std::size_t z = 0; z < want.size(); ++z) {
    EXPECT_NEAR(got[z], want[z], 4 * std::sqrt(want[z] * (1 - want[z]) / opts.samples));
  }
}

TEST(Policy, AllActionsFail) {
  // Under a continuation that always picks LOSE at b, nothing at a can succeed.
  std::vector<BeliefState> s(4);
  s[0] = {"a", Terminal::kNone, {{"X", {{1, 1.0}}}, {"Y", {{2, 1.0}}}}};
  s[1] = {"b", Terminal::kNone, {{"WIN", {{3, 1.0}}}, {"LOSE", {{2, 1.0}}}}};
  s[2] = {"lose", Terminal::kFailure, {}};
  s[3] = {"win", Terminal::kSuccess, {}};
  const BeliefStateModel m(s);
  EXPECT_THROW(act(m, 0, StochasticPolicy::prefer(m, "LOSE"), Amplification::power(1)), AllActionsFail);
  EXPECT_EQ(act(m, 0, StochasticPolicy::prefer(m, "WIN"), Amplification::power(1)),
            (std::vector<double>{1.0, 0.0}));
}

TEST(BeliefModel, Validation) {
  std::vector<BeliefState> s(2);
  s[0] = {"a", Terminal::kNone, {{"X", {{1, 0.5}}}}};
  s[1] = {"win", Terminal::kSuccess, {}};
  EXPECT_THROW(BeliefStateModel{s}, InvalidModel);  // does not sum to 1
  s[0].actions[0].transitions[0].probability = 1.0;
  EXPECT_NO_THROW(BeliefStateModel{s});
  s[1].actions = {{"Y", {{0, 1.0}}}};
  EXPECT_THROW(BeliefStateModel{s}, InvalidModel);  // terminal with actions
  std::vector<BeliefState> lost(2);
  lost[0] = {"a", Terminal::kNone, {{"X", {{1, 1.0}}}}};
  lost[1] = {"lose", Terminal::kFailure, {}};
  EXPECT_THROW(BeliefStateModel{lost}, InvalidModel);  // success unreachable
}

TEST(BeliefModel, Cycles) {
  std::vector<BeliefState> s(3);
  s[0] = {"a", Terminal::kNone, {{"STAY", {{0, 0.5}, {1, 0.5}}}, {"QUIT", {{2, 1.0}}}}};
  s[1] = {"win", Terminal::kSuccess, {}};
  s[2] = {"lose", Terminal::kFailure, {}};
  EXPECT_THROW(BeliefStateModel{s}, InvalidModel);  // cyclic needs a horizon
  const BeliefStateModel m(s, 3);
  EXPECT_FALSE(m.is_acyclic());
  EXPECT_THROW(solve_policy(m, Amplification::power(1)), CyclicBeliefGraph);
  EXPECT_THROW(success_prob(m, 0, StochasticPolicy::uniform(m)), CyclicBeliefGraph);
  // STAY forever eventually runs past the horizon.
  const auto stay = StochasticPolicy::prefer(m, "STAY");
  bool exceeded = false;
  RandomTape t = make_tape(1);
  for (int i = 0; i < 200 && !exceeded; ++i) {
    try {
      outcome(m, 0, stay, t);
    } catch (const HorizonExceeded&) {
      exceeded = true;
    }
  }
  EXPECT_TRUE(exceeded);
}

TEST(BeliefModel, HorizonIsLongestPath) {
  const auto m = fig4();
  EXPECT_EQ(m.horizon(), 2u);
  EXPECT_TRUE(m.is_acyclic());
  EXPECT_EQ(m.action_index(m.root(), "INJECT"), std::optional<std::size_t>(2));
  EXPECT_FALSE(m.action_index(m.root(), "PRAY").has_value());
}

TEST(StochasticPolicyTest, Validate) {
  const auto m = fig4();
  auto pi = StochasticPolicy::uniform(m);
  EXPECT_NO_THROW(pi.validate(m));
  pi.probs[0][0] = 0.9;
  EXPECT_THROW(pi.validate(m), InvalidModel);
}

}  // namespace
}  // namespace querysim
