// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "querysim/finite_model.hpp"
#include "querysim/tape.hpp"

namespace querysim {

using VertexMask = std::uint32_t;

/*!
 * Directed acyclic graph over vertices 0..size()-1, stored as one parent
 * bitmask per vertex (so at most 32 vertices). Acyclicity, the absence of
 * self-loops and the absence of duplicate edges are enforced on every edit.
 */
class Dag {
 public:
  static constexpr std::size_t kMaxVertices = 32;

  explicit Dag(std::size_t vertices = 0);

  /// Throws InvalidModel if the masks describe a cyclic graph or self-loop.
  static Dag from_parent_masks(std::vector<VertexMask> parents);

  std::size_t size() const noexcept { return parents_.size(); }

  /// Throws InvalidModel on self-loops, duplicates, bad indices or cycles.
  void add_edge(std::size_t parent, std::size_t child);

  bool has_edge(std::size_t parent, std::size_t child) const noexcept {
    return (parents_[child] >> parent) & 1u;
  }
  VertexMask parent_mask(std::size_t v) const noexcept { return parents_[v]; }
  std::vector<std::size_t> parents(std::size_t v) const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  std::size_t edge_count() const noexcept;

  /// Parents before children; ties broken by vertex index.
  std::vector<std::size_t> topological_order() const;

  /// Index of the parent assignment of v within `row` (bit i = i-th parent in ascending order).
  std::size_t parent_assignment(std::size_t v, VertexMask row) const noexcept;

  auto operator<=>(const Dag&) const = default;
  bool operator==(const Dag&) const = default;

 private:
  std::vector<VertexMask> parents_;
};

/// All DAGs on D labelled vertices, 1 <= D <= 5 (1, 3, 25, 543, 29281 graphs).
const std::vector<Dag>& enumerate_dags(std::size_t vertices);

/// Uniform draw from enumerate_dags(D), through the countable-pmf sampler.
Dag sample_uniform_dag(std::size_t vertices, RandomTape& tape);

/*!
 * d-separation of x and y given `evidence` by the marking procedure:
 * evidence vertices are marked x, every unmarked parent of a marked vertex
 * is marked + until nothing changes, and then every undirected simple path
 * from x to y must contain an interior vertex matching ->(x)->, <-(x)<-,
 * <-(x)-> or ->(unmarked)<-. Paths are explored depth first and abandoned as
 * soon as they are blocked, so the cost is exponential only in the worst case.
 */
bool d_separated(const Dag& g, std::size_t x, std::size_t y, VertexMask evidence);
bool d_separated(const Dag& g, std::size_t x, std::size_t y, const std::vector<std::size_t>& evidence);

/// Conditional probability tables: p_{j|v} for every vertex j and parent assignment v.
class Cpt {
 public:
  Cpt() = default;
  /// tables[j] must have 2^{|Pa(j)|} entries in [0, 1].
  Cpt(const Dag& g, std::vector<std::vector<double>> tables);

  /// Every p_{j|v} drawn independently from Uniform[0,1].
  static Cpt uniform_random(const Dag& g, RandomTape& tape);

  double prob_one(std::size_t v, std::size_t assignment) const { return tables_[v][assignment]; }
  const std::vector<std::vector<double>>& tables() const noexcept { return tables_; }

 private:
  std::vector<std::vector<double>> tables_;
};

/// prod_j p_j(x_j | pa_j(x)) over all 2^D rows (row bit j is X_j).
FiniteModel<VertexMask> joint_pmf(const Dag& g, const Cpt& cpt);

/// One row by ancestral sampling in topological order.
VertexMask ancestral_sample(const Dag& g, const Cpt& cpt, RandomTape& tape);

/// Boolean data rows of a fixed width (bit j of a row is column j).
struct Dataset {
  std::size_t width = 0;
  std::vector<VertexMask> rows;
};

struct Count {
  std::uint64_t n = 0;  // rows with Pa(X_j) = v
  std::uint64_t k = 0;  // of which X_j = 1

  bool operator==(const Count&) const = default;
};

struct SufficientStats {
  std::vector<std::vector<Count>> counts;  // [vertex][parent assignment]
  std::uint64_t rows = 0;
};

/// Throws WidthMismatch if the data width differs from the graph size.
SufficientStats count_stats(const Dag& g, const Dataset& data);

/// log score(G) = sum_j sum_v [-log(n+1) - log C(n, k)].
double log_score(const SufficientStats& stats);
double log_score(const Dag& g, const Dataset& data);

/// log C(n, k) via lgamma.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// Counts for the two-variable comparison of "X, Y independent" against "X -> Y".
struct PairCounts {
  std::uint64_t n = 0;   // observations
  std::uint64_t k = 0;   // Y = 1
  std::uint64_t n1 = 0;  // X = 1
  std::uint64_t k1 = 0;  // X = 1, Y = 1
  std::uint64_t n0 = 0;  // X = 0
  std::uint64_t k0 = 0;  // X = 0, Y = 1

  /// From a two-column dataset (column 0 is X, column 1 is Y).
  static PairCounts from_data(const Dataset& data);
  void add(bool x, bool y) noexcept;
};

/// log of [(n1+1)(n0+1)/(n+1)] * [C(n1,k1) C(n0,k0) / C(n,k)]; InconsistentCounts on bad input.
double log_bayes_factor_independent_vs_dependent(const PairCounts& c);
double bayes_factor_independent_vs_dependent(const PairCounts& c);

/// Exact rational forms of score(G) and of the pair Bayes factor, for small counts.
Rational exact_score(const SufficientStats& stats);
Rational exact_bayes_factor_independent_vs_dependent(const PairCounts& c);

/// Asymptotic evidence rate for the dependent pair: (1/2)[(1+d)ln(1+d) + (1-d)ln(1-d)].
double dependence_rate(double d);

struct EvidenceCurvePoint {
  std::uint64_t n = 0;
  double mean_log_ratio = 0.0;
  double std_error = 0.0;
};

struct EvidenceExperiment {
  double d = 0.5;               // dependence strength, in (0, 1]
  std::uint64_t n_max = 2000;
  std::uint64_t trials = 100;
  bool independent = false;     // true: X, Y independent fair bits
  // Draw each trial's generating table from the true hypothesis's uniform
  // prior instead of using the fixed tables above; d is then ignored. The
  // expected log ratio for the truth is then a KL divergence, so never negative.
  bool prior_drawn = false;
};

/*!
 * Running log Bayes factor (independent over dependent) averaged over trials
 * at every n in 1..n_max. Dependent data: X fair, P(Y=1|X=1) = (1+d)/2,
 * P(Y=1|X=0) = (1-d)/2. Trial t draws from split_tape(tape, t).
 */
std::vector<EvidenceCurvePoint> weight_of_evidence_experiment(const EvidenceExperiment& config,
                                                              const RandomTape& tape);

/// Least-squares slope of y on x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace querysim
