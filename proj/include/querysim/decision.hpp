// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "querysim/query.hpp"
#include "querysim/tape.hpp"

namespace querysim {

// ---- single decisions between two treatments ----

/// Simulates one use of an action and reports success; `success_probability` is for oracles.
struct ActionSimulator {
  std::function<bool(RandomTape&)> simulate;
  std::optional<double> success_probability;

  static ActionSimulator bernoulli(double p);
};

inline constexpr std::size_t kChooseX = 0;
inline constexpr std::size_t kChooseY = 1;

/// Uniform proposal over {0, ..., count-1}.
GenerativeProgram<std::size_t> uniform_action(std::size_t count);

/// SIM_Z: accepts proposal z iff sims[z] succeeds.
Predicate<std::size_t> simulation_predicate(std::vector<ActionSimulator> sims);

/*!
 * MAJ_Z over two treatments: run both; accept Z if Z succeeded and the other
 * failed, reject if the reverse, and flip a fair coin when they agree.
 */
Predicate<std::size_t> majority_predicate(ActionSimulator x, ActionSimulator y);

/// QUERY(uniform action, REPEAT(k, SIM_Z)); returns kChooseX or kChooseY.
std::size_t choose_multiplicative(const ActionSimulator& x, const ActionSimulator& y,
                                  std::uint64_t k, const QueryOptions& opts = {});

/// QUERY(uniform action, REPEAT(k, MAJ_Z)).
std::size_t choose_additive(const ActionSimulator& x, const ActionSimulator& y, std::uint64_t k,
                            const QueryOptions& opts = {});

enum class ChoiceRule { kMultiplicative, kAdditive };

/// Fraction of opts.samples independent choices that pick x.
double choice_frequency(ChoiceRule rule, const ActionSimulator& x, const ActionSimulator& y,
                        std::uint64_t k, const QueryOptions& opts);

/// rho^k / (rho^k + 1) with rho = px / py.
double multiplicative_choice_probability(double px, double py, std::uint64_t k);

/// 1 / (1 + ((1 - alpha) / (1 + alpha))^k) with alpha = px - py.
double additive_choice_probability(double px, double py, std::uint64_t k);

// ---- sequential decisions over belief states ----

enum class Terminal { kNone, kSuccess, kFailure };

struct Transition {
  std::size_t target = 0;
  double probability = 0.0;
};

struct ActionEdge {
  std::string name;
  std::vector<Transition> transitions;
};

struct BeliefState {
  std::string name;
  Terminal terminal = Terminal::kNone;
  std::vector<ActionEdge> actions;  // empty iff terminal
};

/*!
 * Finite belief-state graph with root 0. The horizon M bounds the number of
 * transitions OUTCOME may take; it defaults to the longest path when the
 * graph is acyclic and must be given explicitly otherwise.
 */
class BeliefStateModel {
 public:
  /// Throws InvalidModel when a transition list does not sum to 1 within 1e-12,
  /// a terminal state has actions, a non-terminal state has none, or some
  /// non-terminal state cannot reach a success terminal.
  explicit BeliefStateModel(std::vector<BeliefState> states,
                            std::optional<std::size_t> horizon = std::nullopt);

  const std::vector<BeliefState>& states() const noexcept { return states_; }
  const BeliefState& state(std::size_t i) const { return states_.at(i); }
  std::size_t size() const noexcept { return states_.size(); }
  std::size_t root() const noexcept { return 0; }
  std::size_t horizon() const noexcept { return horizon_; }
  bool is_acyclic() const noexcept { return acyclic_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Index of the named action at `state`, if offered there.
  std::optional<std::size_t> action_index(std::size_t state, std::string_view action) const;

  /// Successors before predecessors; CyclicBeliefGraph if there is a cycle.
  const std::vector<std::size_t>& reverse_topological_order() const;

 private:
  std::vector<BeliefState> states_;
  std::vector<std::size_t> reverse_topological_;
  std::size_t horizon_ = 0;
  bool acyclic_ = true;
};

/// probs[state][action]; empty rows for terminal states.
struct StochasticPolicy {
  std::vector<std::vector<double>> probs;

  /// Throws InvalidModel unless each non-terminal row matches the model and sums to 1.
  void validate(const BeliefStateModel& model) const;

  static StochasticPolicy uniform(const BeliefStateModel& model);
  /// The named action wherever it is offered, the first action elsewhere.
  static StochasticPolicy prefer(const BeliefStateModel& model, std::string_view action);
};

/// Simulates pi from b until a terminal; HorizonExceeded after more than M transitions.
bool outcome(const BeliefStateModel& model, std::size_t b, const StochasticPolicy& pi,
             RandomTape& tape);

/// Exact success probability of following pi from b. CyclicBeliefGraph on cyclic models.
double success_prob(const BeliefStateModel& model, std::size_t b, const StochasticPolicy& pi);

/// q_z: take action z at b, then follow pi.
double action_success_prob(const BeliefStateModel& model, std::size_t b, std::size_t z,
                           const StochasticPolicy& pi);

/// Exponent k of the choice rule, or the k -> infinity limit.
struct Amplification {
  std::uint64_t k = 1;
  bool argmax = false;

  static Amplification power(std::uint64_t k) { return {k, false}; }
  static Amplification limit() { return {0, true}; }
};

/*!
 * Distribution over the actions at b: weight q_z^k, or uniform over the exact
 * maximizers in argmax mode. AllActionsFail if every q_z is 0.
 */
std::vector<double> act(const BeliefStateModel& model, std::size_t b, const StochasticPolicy& pi,
                        Amplification amp);

/// One draw of QUERY(uniform action, REPEAT(k, SIM_{b,pi,Z})) using outcome().
std::size_t act_sample(const BeliefStateModel& model, std::size_t b, const StochasticPolicy& pi,
                       std::uint64_t k, const QueryOptions& opts);

/// Action frequencies over opts.samples independent act_sample draws.
std::vector<double> act_sample_frequencies(const BeliefStateModel& model, std::size_t b,
                                           const StochasticPolicy& pi, std::uint64_t k,
                                           const QueryOptions& opts);

struct PolicySolution {
  StochasticPolicy policy;
  std::vector<double> success;                     // success_prob of every state under policy
  std::vector<std::vector<double>> action_success;  // q_z at every state
};

/// POLICY(b) = ACT(b, POLICY), by backward induction. CyclicBeliefGraph on cycles.
PolicySolution solve_policy(const BeliefStateModel& model, Amplification amp);

}  // namespace querysim
