// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "querysim/errors.hpp"
#include "querysim/tape.hpp"

namespace querysim {

/*!
 * A sampler from a random tape to an outcome. `max_bits` operationalizes
 * "halts almost surely": reading more than that many bits in one run raises
 * BitBudgetExceeded.
 */
template <class T>
struct GenerativeProgram {
  std::function<T(RandomTape&)> sampler;
  std::uint64_t max_bits = kDefaultBitBudget;
};

/*!
 * Accept/reject test over a prior outcome. The tape argument is a stream
 * disjoint from the one the prior read; predicates that only inspect the
 * outcome ignore it.
 */
template <class T>
using Predicate = std::function<bool(const T&, RandomTape&)>;

template <class T>
GenerativeProgram<T> make_program(std::function<T(RandomTape&)> sampler,
                                  std::uint64_t max_bits = kDefaultBitBudget) {
  return GenerativeProgram<T>{std::move(sampler), max_bits};
}

/// Predicate that looks at the outcome only.
template <class T, class F>
Predicate<T> outcome_predicate(F f) {
  return [f = std::move(f)](const T& x, RandomTape&) { return static_cast<bool>(f(x)); };
}

template <class T>
Predicate<T> always_accept() {
  return [](const T&, RandomTape&) { return true; };
}

/// Run `p` on `tape`, enforcing its bit budget relative to the current cursor.
template <class T>
T run_program(const GenerativeProgram<T>& p, RandomTape& tape) {
  const std::uint64_t saved = tape.bit_limit();
  const std::uint64_t limit = tape.cursor() + p.max_bits;
  tape.set_bit_limit(limit < saved ? limit : saved);
  struct Restore {
    RandomTape& t;
    std::uint64_t v;
    ~Restore() { t.set_bit_limit(v); }
  } restore{tape, saved};
  return p.sampler(tape);
}

struct QueryOptions {
  std::uint64_t max_iterations = 1'000'000;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
  }
};

template <class T>
struct QueryDraw {
  T value;
  std::uint64_t iterations;  // 1 when the first iteration accepted
};

/*!
 * QUERY(p, c) driven by `master`: iteration n runs p on split_tape(master, n)
 * and c on that tape's child 0, returning the first accepted outcome.
 */
template <class T>
QueryDraw<T> query_from(const RandomTape& master, const GenerativeProgram<T>& p,
                        const Predicate<T>& c, std::uint64_t max_iterations) {
  for (std::uint64_t n = 0; n < max_iterations; ++n) {
    RandomTape tape = split_tape(master, n);
    T x = run_program(p, tape);
    RandomTape predicate_tape = split_tape(tape, 0);
    predicate_tape.set_bit_limit(kDefaultBitBudget);
    if (c(x, predicate_tape)) return QueryDraw<T>{std::move(x), n + 1};
  }
  throw MaxIterationsExceeded("no acceptance within " + std::to_string(max_iterations) +
                              " iterations");
}

/// One draw from the prior conditioned on acceptance, seeded by opts.seed.
template <class T>
T query(const GenerativeProgram<T>& p, const Predicate<T>& c, const QueryOptions& opts = {}) {
  opts.validate();
  return query_from(make_tape(opts.seed), p, c, opts.max_iterations).value;
}

/// opts.samples independent draws; draw s is driven by split_tape(make_tape(seed), s).
template <class T>
std::vector<QueryDraw<T>> query_samples(const GenerativeProgram<T>& p, const Predicate<T>& c,
                                        const QueryOptions& opts) {
  opts.validate();
  const RandomTape master = make_tape(opts.seed);
  std::vector<QueryDraw<T>> out;
  out.reserve(opts.samples);
  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    out.push_back(query_from(split_tape(master, s), p, c, opts.max_iterations));
  }
  return out;
}

/// Accepts iff k evaluations of c, on k fresh sub-tapes, all accept.
template <class T>
Predicate<T> repeat_predicate(std::uint64_t k, Predicate<T> c) {
  return [k, c = std::move(c)](const T& x, RandomTape& tape) {
    for (std::uint64_t i = 0; i < k; ++i) {
      RandomTape sub = split_tape(tape, i);
      if (!c(x, sub)) return false;
    }
    return true;
  };
}

}  // namespace querysim
