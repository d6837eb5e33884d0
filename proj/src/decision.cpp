// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/decision.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "querysim/computable.hpp"
#include "querysim/errors.hpp"

namespace querysim {

namespace {

constexpr double kRowTolerance = 1e-12;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

// Index drawn from a finite distribution through the countable sampler.
std::size_t draw_index(const std::vector<double>& probs, RandomTape& tape) {
  std::vector<std::pair<std::size_t, double>> atoms;
  atoms.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) atoms.emplace_back(i, probs[i]);
  return sample_countable(ComputablePmf<std::size_t>::finite(std::move(atoms)), tape);
}

std::size_t draw_transition(const ActionEdge& edge, RandomTape& tape) {
  std::vector<double> probs;
  probs.reserve(edge.transitions.size());
  for (const auto& t : edge.transitions) probs.push_back(t.probability);
  return edge.transitions[draw_index(probs, tape)].target;
}

void check_state(const BeliefStateModel& model, std::size_t b) {
  if (b >= model.size()) throw DomainError("belief state " + std::to_string(b) + " out of range");
}

// success_prob of every state under pi.
std::vector<double> state_values(const BeliefStateModel& model, const StochasticPolicy& pi) {
  pi.validate(model);
  std::vector<double> value(model.size(), 0.0);
  for (std::size_t s : model.reverse_topological_order()) {
    const auto& st = model.state(s);
    if (st.terminal != Terminal::kNone) {
      value[s] = st.terminal == Terminal::kSuccess ? 1.0 : 0.0;
      continue;
    }
    double v = 0.0;
    for (std::size_t a = 0; a < st.actions.size(); ++a) {
      double q = 0.0;
      for (const auto& t : st.actions[a].transitions) q += t.probability * value[t.target];
      v += pi.probs[s][a] * q;
    }
    value[s] = v;
  }
  return value;
}

std::vector<double> choice_weights(const std::vector<double>& q, Amplification amp) {
  const double qmax = *std::max_element(q.begin(), q.end());
  if (!(qmax > 0.0)) throw AllActionsFail("every action has zero success probability");
  std::vector<double> w(q.size(), 0.0);
  if (amp.argmax) {
    std::size_t ties = 0;
    for (double v : q) ties += v == qmax;
    for (std::size_t i = 0; i < q.size(); ++i) w[i] = q[i] == qmax ? 1.0 / static_cast<double>(ties) : 0.0;
    return w;
  }
  // Scale by qmax first so large k does not underflow.
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    w[i] = std::pow(q[i] / qmax, static_cast<double>(amp.k));
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

ActionSimulator ActionSimulator::bernoulli(double p) {
  check_probability(p, "success probability");
  return ActionSimulator{[p](RandomTape& tape) { return tape.bernoulli(p); }, p};
}

GenerativeProgram<std::size_t> uniform_action(std::size_t count) {
  if (count == 0) throw DomainError("need at least one action");
  return make_program<std::size_t>([count](RandomTape& tape) {
    return static_cast<std::size_t>(tape.uniform_int(count));
  });
}

Predicate<std::size_t> simulation_predicate(std::vector<ActionSimulator> sims) {
  return [sims = std::move(sims)](const std::size_t& z, RandomTape& tape) {
    return sims.at(z).simulate(tape);
  };
}

Predicate<std::size_t> majority_predicate(ActionSimulator x, ActionSimulator y) {
  return [x = std::move(x), y = std::move(y)](const std::size_t& z, RandomTape& tape) {
    const bool sx = x.simulate(tape);
    const bool sy = y.simulate(tape);
    const bool mine = z == kChooseX ? sx : sy;
    const bool other = z == kChooseX ? sy : sx;
    if (mine != other) return mine;
    return tape.bit();
  };
}

namespace {

Predicate<std::size_t> rule_predicate(ChoiceRule rule, const ActionSimulator& x,
                                      const ActionSimulator& y, std::uint64_t k) {
  Predicate<std::size_t> base = rule == ChoiceRule::kMultiplicative
                                    ? simulation_predicate({x, y})
                                    : majority_predicate(x, y);
  return repeat_predicate<std::size_t>(k, std::move(base));
}

}  // namespace

std::size_t choose_multiplicative(const ActionSimulator& x, const ActionSimulator& y,
                                  std::uint64_t k, const QueryOptions& opts) {
  return query(uniform_action(2), rule_predicate(ChoiceRule::kMultiplicative, x, y, k), opts);
}

std::size_t choose_additive(const ActionSimulator& x, const ActionSimulator& y, std::uint64_t k,
                            const QueryOptions& opts) {
  return query(uniform_action(2), rule_predicate(ChoiceRule::kAdditive, x, y, k), opts);
}

double choice_frequency(ChoiceRule rule, const ActionSimulator& x, const ActionSimulator& y,
                        std::uint64_t k, const QueryOptions& opts) {
  if (opts.samples == 0) throw DomainError("samples must be positive");
  const auto draws = query_samples(uniform_action(2), rule_predicate(rule, x, y, k), opts);
  std::uint64_t hits = 0;
  for (const auto& d : draws) hits += d.value == kChooseX;
  return static_cast<double>(hits) / static_cast<double>(draws.size());
}

double multiplicative_choice_probability(double px, double py, std::uint64_t k) {
  check_probability(px, "px");
  check_probability(py, "py");
  if (px == 0.0 && py == 0.0) throw DomainError("both success probabilities are zero");
  // rho^k / (rho^k + 1) = px^k / (px^k + py^k), written to stay finite for py = 0.
  const double m = std::max(px, py);
  const double a = std::pow(px / m, static_cast<double>(k));
  const double b = std::pow(py / m, static_cast<double>(k));
  return a / (a + b);
}

double additive_choice_probability(double px, double py, std::uint64_t k) {
  check_probability(px, "px");
  check_probability(py, "py");
  const double alpha = px - py;
  const double a = std::pow(1.0 + alpha, static_cast<double>(k));
  const double b = std::pow(1.0 - alpha, static_cast<double>(k));
  return a / (a + b);
}

BeliefStateModel::BeliefStateModel(std::vector<BeliefState> states, std::optional<std::size_t> horizon)
    : states_(std::move(states)) {
  if (states_.empty()) throw InvalidModel("belief model has no states");
  const std::size_t n = states_.size();
  for (std::size_t s = 0; s < n; ++s) {
    const auto& st = states_[s];
    if (st.terminal != Terminal::kNone && !st.actions.empty()) {
      throw InvalidModel("terminal state '" + st.name + "' has actions");
    }
    if (st.terminal == Terminal::kNone && st.actions.empty()) {
      throw InvalidModel("state '" + st.name + "' is neither terminal nor has actions");
    }
    for (std::size_t a = 0; a < st.actions.size(); ++a) {
      const auto& edge = st.actions[a];
      for (std::size_t b = 0; b < a; ++b) {
        if (st.actions[b].name == edge.name) {
          throw InvalidModel("action '" + edge.name + "' listed twice at '" + st.name + "'");
        }
      }
      if (edge.transitions.empty()) throw InvalidModel("action '" + edge.name + "' has no transitions");
      double sum = 0.0;
      for (const auto& t : edge.transitions) {
        if (t.target >= n) throw InvalidModel("transition target out of range");
        if (!(t.probability >= 0.0 && t.probability <= 1.0)) {
          throw InvalidModel("transition probability outside [0, 1]");
        }
        sum += t.probability;
      }
      if (std::abs(sum - 1.0) > kRowTolerance) {
        throw InvalidModel("transitions of '" + st.name + "' / '" + edge.name + "' sum to " +
                           std::to_string(sum));
      }
    }
  }

  // Success reachability, backwards over positive-probability edges.
  std::vector<char> good(n, 0);
  for (std::size_t s = 0; s < n; ++s) good[s] = states_[s].terminal == Terminal::kSuccess;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (good[s] || states_[s].terminal != Terminal::kNone) continue;
      for (const auto& edge : states_[s].actions) {
        for (const auto& t : edge.transitions) {
          if (t.probability > 0.0 && good[t.target]) good[s] = 1;
        }
      }
      changed |= good[s] != 0;
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (states_[s].terminal == Terminal::kNone && !good[s]) {
      throw InvalidModel("state '" + states_[s].name + "' cannot reach success");
    }
  }

  // Post-order DFS gives successors before predecessors; longest paths come along.
  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> color(n, kWhite);
  std::vector<std::size_t> depth(n, 0);
  auto visit = [&](auto&& self, std::size_t s) -> void {
    color[s] = kGrey;
    for (const auto& edge : states_[s].actions) {
      for (const auto& t : edge.transitions) {
        if (color[t.target] == kGrey) {
          acyclic_ = false;
          continue;
        }
        if (color[t.target] == kWhite) self(self, t.target);
        depth[s] = std::max(depth[s], depth[t.target] + 1);
      }
    }
    color[s] = kBlack;
    reverse_topological_.push_back(s);
  };
  for (std::size_t s = 0; s < n; ++s) {
    if (color[s] == kWhite) visit(visit, s);
  }
  if (!acyclic_) reverse_topological_.clear();

  if (horizon) {
    horizon_ = *horizon;
  } else if (acyclic_) {
    horizon_ = depth[0];
  } else {
    throw InvalidModel("a cyclic belief model needs an explicit horizon");
  }
}

std::optional<std::size_t> BeliefStateModel::index_of(std::string_view name) const {
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (states_[s].name == name) return s;
  }
  return std::nullopt;
}

std::optional<std::size_t> BeliefStateModel::action_index(std::size_t state,
                                                          std::string_view action) const {
  const auto& acts = states_.at(state).actions;
  for (std::size_t a = 0; a < acts.size(); ++a) {
    if (acts[a].name == action) return a;
  }
  return std::nullopt;
}

const std::vector<std::size_t>& BeliefStateModel::reverse_topological_order() const {
  if (!acyclic_) throw CyclicBeliefGraph("belief-state graph has a directed cycle");
  return reverse_topological_;
}

void StochasticPolicy::validate(const BeliefStateModel& model) const {
  if (probs.size() != model.size()) throw InvalidModel("policy does not cover every state");
  for (std::size_t s = 0; s < model.size(); ++s) {
    const auto& st = model.state(s);
    if (st.terminal != Terminal::kNone) continue;
    if (probs[s].size() != st.actions.size()) {
      throw InvalidModel("policy row for '" + st.name + "' has the wrong length");
    }
    double sum = 0.0;
    for (double p : probs[s]) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidModel("policy probability outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw InvalidModel("policy row for '" + st.name + "' does not sum to 1");
    }
  }
}

StochasticPolicy StochasticPolicy::uniform(const BeliefStateModel& model) {
  StochasticPolicy pi;
  pi.probs.resize(model.size());
  for (std::size_t s = 0; s < model.size(); ++s) {
    const std::size_t m = model.state(s).actions.size();
    pi.probs[s].assign(m, m ? 1.0 / static_cast<double>(m) : 0.0);
  }
  return pi;
}

StochasticPolicy StochasticPolicy::prefer(const BeliefStateModel& model, std::string_view action) {
  StochasticPolicy pi;
  pi.probs.resize(model.size());
  for (std::size_t s = 0; s < model.size(); ++s) {
    const std::size_t m = model.state(s).actions.size();
    if (m == 0) continue;
    pi.probs[s].assign(m, 0.0);
    pi.probs[s][model.action_index(s, action).value_or(0)] = 1.0;
  }
  return pi;
}

bool outcome(const BeliefStateModel& model, std::size_t b, const StochasticPolicy& pi,
             RandomTape& tape) {
  check_state(model, b);
  for (std::size_t steps = 0;; ++steps) {
    const auto& st = model.state(b);
    if (st.terminal != Terminal::kNone) return st.terminal == Terminal::kSuccess;
    if (steps >= model.horizon()) {
      throw HorizonExceeded("no terminal state within " + std::to_string(model.horizon()) +
                            " transitions");
    }
    const std::size_t a = draw_index(pi.probs.at(b), tape);
    b = draw_transition(st.actions[a], tape);
  }
}

double success_prob(const BeliefStateModel& model, std::size_t b, const StochasticPolicy& pi) {
  check_state(model, b);
  return state_values(model, pi)[b];
}

double action_success_prob(const BeliefStateModel& model, std::size_t b, std::size_t z,
                           const StochasticPolicy& pi) {
  check_state(model, b);
  const auto& acts = model.state(b).actions;
  if (z >= acts.size()) throw DomainError("action index out of range");
  const auto value = state_values(model, pi);
  double q = 0.0;
  for (const auto& t : acts[z].transitions) q += t.probability * value[t.target];
  return q;
}

std::vector<double> act(const BeliefStateModel& model, std::size_t b, const StochasticPolicy& pi,
                        Amplification amp) {
  check_state(model, b);
  const auto& st = model.state(b);
  if (st.terminal != Terminal::kNone) throw DomainError("cannot act at a terminal state");
  const auto value = state_values(model, pi);
  std::vector<double> q(st.actions.size(), 0.0);
  for (std::size_t a = 0; a < q.size(); ++a) {
    for (const auto& t : st.actions[a].transitions) q[a] += t.probability * value[t.target];
  }
  return choice_weights(q, amp);
}

namespace {

Predicate<std::size_t> belief_simulation(const BeliefStateModel& model, std::size_t b,
                                         const StochasticPolicy& pi) {
  return [&model, b, &pi](const std::size_t& z, RandomTape& tape) {
    const std::size_t next = draw_transition(model.state(b).actions[z], tape);
    return outcome(model, next, pi, tape);
  };
}

}  // namespace

std::size_t act_sample(const BeliefStateModel& model, std::size_t b, const StochasticPolicy& pi,
                       std::uint64_t k, const QueryOptions& opts) {
  check_state(model, b);
  pi.validate(model);
  const auto& st = model.state(b);
  if (st.terminal != Terminal::kNone) throw DomainError("cannot act at a terminal state");
  return query(uniform_action(st.actions.size()),
               repeat_predicate<std::size_t>(k, belief_simulation(model, b, pi)), opts);
}

std::vector<double> act_sample_frequencies(const BeliefStateModel& model, std::size_t b,
                                           const StochasticPolicy& pi, std::uint64_t k,
                                           const QueryOptions& opts) {
  check_state(model, b);
  pi.validate(model);
  const auto& st = model.state(b);
  if (st.terminal != Terminal::kNone) throw DomainError("cannot act at a terminal state");
  if (opts.samples == 0) throw DomainError("samples must be positive");
  const auto draws = query_samples(uniform_action(st.actions.size()),
                                   repeat_predicate<std::size_t>(k, belief_simulation(model, b, pi)),
                                   opts);
  std::vector<double> freq(st.actions.size(), 0.0);
  for (const auto& d : draws) freq[d.value] += 1.0;
  for (double& f : freq) f /= static_cast<double>(draws.size());
  return freq;
}

PolicySolution solve_policy(const BeliefStateModel& model, Amplification amp) {
  PolicySolution sol;
  const std::size_t n = model.size();
  sol.policy.probs.resize(n);
  sol.success.assign(n, 0.0);
  sol.action_success.resize(n);
  for (std::size_t s : model.reverse_topological_order()) {
    const auto& st = model.state(s);
    if (st.terminal != Terminal::kNone) {
      sol.success[s] = st.terminal == Terminal::kSuccess ? 1.0 : 0.0;
      continue;
    }
    auto& q = sol.action_success[s];
    q.assign(st.actions.size(), 0.0);
    for (std::size_t a = 0; a < q.size(); ++a) {
      for (const auto& t : st.actions[a].transitions) q[a] += t.probability * sol.success[t.target];
    }
    sol.policy.probs[s] = choice_weights(q, amp);
    double v = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) v += sol.policy.probs[s][a] * q[a];
    sol.success[s] = v;
  }
  return sol;
}

}  // namespace querysim
