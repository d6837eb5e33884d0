// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/structure.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>

#include "querysim/computable.hpp"
#include "querysim/errors.hpp"

namespace querysim {
namespace {

bool masks_acyclic(const std::vector<VertexMask>& parents) {
  // Kahn's algorithm on bitmasks: repeatedly strip vertices with no remaining parents.
  const std::size_t n = parents.size();
  VertexMask remaining = n == 32 ? ~VertexMask{0} : ((VertexMask{1} << n) - 1);
  while (remaining != 0) {
    VertexMask ready = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (((remaining >> v) & 1u) && (parents[v] & remaining) == 0) ready |= VertexMask{1} << v;
    }
    if (ready == 0) return false;
    remaining &= ~ready;
  }
  return true;
}

void check_vertex(const Dag& g, std::size_t v) {
  if (v >= g.size()) throw DomainError("vertex " + std::to_string(v) + " out of range");
}

}  // namespace

Dag::Dag(std::size_t vertices) : parents_(vertices, 0) {
  if (vertices > kMaxVertices) throw DimensionTooLarge("graphs are limited to 32 vertices");
}

Dag Dag::from_parent_masks(std::vector<VertexMask> parents) {
  Dag g(parents.size());
  const std::size_t n = parents.size();
  const VertexMask all = n == 32 ? ~VertexMask{0} : ((VertexMask{1} << n) - 1);
  for (std::size_t v = 0; v < n; ++v) {
    if ((parents[v] >> v) & 1u) throw InvalidModel("self-loop at vertex " + std::to_string(v));
    if (parents[v] & ~all) throw InvalidModel("parent index out of range");
  }
  if (!masks_acyclic(parents)) throw InvalidModel("graph has a directed cycle");
  g.parents_ = std::move(parents);
  return g;
}

void Dag::add_edge(std::size_t parent, std::size_t child) {
  if (parent >= size() || child >= size()) throw InvalidModel("edge endpoint out of range");
  if (parent == child) throw InvalidModel("self-loop at vertex " + std::to_string(parent));
  if (has_edge(parent, child)) throw InvalidModel("duplicate edge");
  parents_[child] |= VertexMask{1} << parent;
  if (!masks_acyclic(parents_)) {
    parents_[child] &= ~(VertexMask{1} << parent);
    throw InvalidModel("edge " + std::to_string(parent) + "->" + std::to_string(child) +
                       " closes a cycle");
  }
}

std::vector<std::size_t> Dag::parents(std::size_t v) const {
  std::vector<std::size_t> out;
  for (VertexMask m = parents_[v]; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Dag::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t c = 0; c < size(); ++c) {
    for (std::size_t p : parents(c)) out.emplace_back(p, c);
  }
  return out;
}

std::size_t Dag::edge_count() const noexcept {
  std::size_t n = 0;
  for (VertexMask m : parents_) n += std::popcount(m);
  return n;
}

std::vector<std::size_t> Dag::topological_order() const {
  std::vector<std::size_t> order;
  order.reserve(size());
  VertexMask placed = 0;
  while (order.size() < size()) {
    for (std::size_t v = 0; v < size(); ++v) {
      if (!((placed >> v) & 1u) && (parents_[v] & ~placed) == 0) {
        order.push_back(v);
        placed |= VertexMask{1} << v;
        break;
      }
    }
  }
  return order;
}

std::size_t Dag::parent_assignment(std::size_t v, VertexMask row) const noexcept {
  std::size_t idx = 0;
  unsigned i = 0;
  for (VertexMask m = parents_[v]; m != 0; m &= m - 1, ++i) {
    idx |= static_cast<std::size_t>((row >> std::countr_zero(m)) & 1u) << i;
  }
  return idx;
}

const std::vector<Dag>& enumerate_dags(std::size_t vertices) {
  if (vertices < 1) throw DomainError("need at least one vertex");
  if (vertices > 5) throw DimensionTooLarge("DAG enumeration is limited to 5 vertices");
  static std::array<std::vector<Dag>, 6> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& out = cache[vertices];
  if (!out.empty()) return out;

  // Each vertex picks a parent set among the other D-1 vertices: D(D-1) free bits.
  const std::size_t d = vertices;
  const unsigned free_bits = static_cast<unsigned>(d * (d - 1));
  std::vector<VertexMask> parents(d);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << free_bits); ++code) {
    unsigned bit = 0;
    for (std::size_t v = 0; v < d; ++v) {
      VertexMask m = 0;
      for (std::size_t u = 0; u < d; ++u) {
        if (u == v) continue;
        if ((code >> bit++) & 1u) m |= VertexMask{1} << u;
      }
      parents[v] = m;
    }
    if (masks_acyclic(parents)) out.push_back(Dag::from_parent_masks(parents));
  }
  return out;
}

Dag sample_uniform_dag(std::size_t vertices, RandomTape& tape) {
  const auto& all = enumerate_dags(vertices);
  std::vector<std::pair<std::size_t, double>> atoms;
  atoms.reserve(all.size());
  const double w = 1.0 / static_cast<double>(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) atoms.emplace_back(i, w);
  return all[sample_countable(ComputablePmf<std::size_t>::finite(std::move(atoms)), tape)];
}

bool d_separated(const Dag& g, std::size_t x, std::size_t y, VertexMask evidence) {
  check_vertex(g, x);
  check_vertex(g, y);
  if (x == y) throw DomainError("d-separation needs two distinct vertices");
  if (((evidence >> x) & 1u) || ((evidence >> y) & 1u)) {
    throw DomainError("endpoints must not be in the evidence set");
  }
  const std::size_t n = g.size();

  // Marks: cross = evidence, plus = unmarked ancestors of marked vertices.
  const VertexMask cross = evidence;
  VertexMask marked = evidence;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!((marked >> v) & 1u)) continue;
      const VertexMask fresh = g.parent_mask(v) & ~marked;
      if (fresh) {
        marked |= fresh;
        changed = true;
      }
    }
  }

  std::vector<VertexMask> children(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (VertexMask m = g.parent_mask(v); m != 0; m &= m - 1) {
      children[std::countr_zero(m)] |= VertexMask{1} << v;
    }
  }

  // An interior vertex blocks the path unless it matches an admissible pattern.
  auto blocks = [&](std::size_t v, bool arrived_forward, bool leaves_forward) {
    const bool is_cross = (cross >> v) & 1u;
    if (arrived_forward && !leaves_forward) return ((marked >> v) & 1u) == 0;  // -> v <-
    return is_cross;  // -> v ->, <- v <-, <- v ->
  };

  // Depth-first over simple undirected paths; blocked prefixes are dropped.
  // `arrived_forward`: the edge into v points toward v.
  VertexMask on_path = VertexMask{1} << x;
  auto dfs = [&](auto&& self, std::size_t v, bool arrived_forward, bool at_start) -> bool {
    const VertexMask nbrs = (children[v] | g.parent_mask(v)) & ~on_path;
    for (VertexMask m = nbrs; m != 0; m &= m - 1) {
      const std::size_t w = std::countr_zero(m);
      const bool forward = (children[v] >> w) & 1u;
      if (!at_start && blocks(v, arrived_forward, forward)) continue;
      if (w == y) return true;
      on_path |= VertexMask{1} << w;
      const bool open = self(self, w, forward, false);
      on_path &= ~(VertexMask{1} << w);
      if (open) return true;
    }
    return false;
  };
  return !dfs(dfs, x, false, true);
}

bool d_separated(const Dag& g, std::size_t x, std::size_t y, const std::vector<std::size_t>& evidence) {
  VertexMask e = 0;
  for (std::size_t v : evidence) {
    check_vertex(g, v);
    e |= VertexMask{1} << v;
  }
  return d_separated(g, x, y, e);
}

Cpt::Cpt(const Dag& g, std::vector<std::vector<double>> tables) : tables_(std::move(tables)) {
  if (tables_.size() != g.size()) throw InvalidModel("one table per vertex is required");
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t want = std::size_t{1} << std::popcount(g.parent_mask(v));
    if (tables_[v].size() != want) {
      throw InvalidModel("table for vertex " + std::to_string(v) + " needs " +
                         std::to_string(want) + " entries");
    }
    for (double p : tables_[v]) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidModel("table entry outside [0, 1]");
    }
  }
}

Cpt Cpt::uniform_random(const Dag& g, RandomTape& tape) {
  std::vector<std::vector<double>> tables(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    tables[v].resize(std::size_t{1} << std::popcount(g.parent_mask(v)));
    for (double& p : tables[v]) p = tape.uniform01();
  }
  return Cpt(g, std::move(tables));
}

FiniteModel<VertexMask> joint_pmf(const Dag& g, const Cpt& cpt) {
  if (cpt.tables().size() != g.size()) throw InvalidModel("table count does not match graph");
  if (g.size() > 20) throw DimensionTooLarge("joint enumeration is limited to 20 vertices");
  const VertexMask rows = VertexMask{1} << g.size();
  std::vector<std::pair<VertexMask, double>> atoms;
  atoms.reserve(rows);
  for (VertexMask row = 0; row < rows; ++row) {
    double p = 1.0;
    for (std::size_t v = 0; v < g.size(); ++v) {
      const double one = cpt.prob_one(v, g.parent_assignment(v, row));
      p *= ((row >> v) & 1u) ? one : 1.0 - one;
    }
    atoms.emplace_back(row, p);
  }
  return FiniteModel<VertexMask>::from_weights(std::move(atoms));
}

VertexMask ancestral_sample(const Dag& g, const Cpt& cpt, RandomTape& tape) {
  VertexMask row = 0;
  for (std::size_t v : g.topological_order()) {
    if (tape.bernoulli(cpt.prob_one(v, g.parent_assignment(v, row)))) row |= VertexMask{1} << v;
  }
  return row;
}

SufficientStats count_stats(const Dag& g, const Dataset& data) {
  if (data.width != g.size()) {
    throw WidthMismatch("data has " + std::to_string(data.width) + " columns, graph has " +
                        std::to_string(g.size()) + " vertices");
  }
  SufficientStats s;
  s.rows = data.rows.size();
  s.counts.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    s.counts[v].resize(std::size_t{1} << std::popcount(g.parent_mask(v)));
  }
  for (VertexMask row : data.rows) {
    for (std::size_t v = 0; v < g.size(); ++v) {
      Count& c = s.counts[v][g.parent_assignment(v, row)];
      ++c.n;
      c.k += (row >> v) & 1u;
    }
  }
  return s;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw InconsistentCounts("k exceeds n in binomial coefficient");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

namespace {

double count_term(const Count& c) {
  return -std::log(static_cast<double>(c.n) + 1.0) - log_binomial(c.n, c.k);
}

}  // namespace

double log_score(const SufficientStats& stats) {
  double s = 0.0;
  for (const auto& per_vertex : stats.counts) {
    for (const Count& c : per_vertex) s += count_term(c);
  }
  return s;
}

double log_score(const Dag& g, const Dataset& data) { return log_score(count_stats(g, data)); }

PairCounts PairCounts::from_data(const Dataset& data) {
  if (data.width != 2) throw WidthMismatch("pair counts need exactly two columns");
  PairCounts c;
  for (VertexMask row : data.rows) c.add(row & 1u, (row >> 1) & 1u);
  return c;
}

void PairCounts::add(bool x, bool y) noexcept {
  ++n;
  k += y;
  if (x) {
    ++n1;
    k1 += y;
  } else {
    ++n0;
    k0 += y;
  }
}

double log_bayes_factor_independent_vs_dependent(const PairCounts& c) {
  if (c.n != c.n1 + c.n0 || c.k != c.k1 + c.k0 || c.k1 > c.n1 || c.k0 > c.n0) {
    throw InconsistentCounts("pair counts are inconsistent");
  }
  // Y's term under G (no parents) against Y's two terms under G' (parent X).
  return count_term({c.n, c.k}) - count_term({c.n1, c.k1}) - count_term({c.n0, c.k0});
}

double bayes_factor_independent_vs_dependent(const PairCounts& c) {
  return std::exp(log_bayes_factor_independent_vs_dependent(c));
}

namespace {

boost::multiprecision::cpp_int binomial(std::uint64_t n, std::uint64_t k) {
  boost::multiprecision::cpp_int c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// (n+1)^-1 C(n,k)^-1 as a rational.
Rational exact_term(const Count& c) {
  return Rational(1) / Rational(boost::multiprecision::cpp_int(c.n + 1) * binomial(c.n, c.k));
}

void check_pair(const PairCounts& c) {
  if (c.n != c.n1 + c.n0 || c.k != c.k1 + c.k0 || c.k1 > c.n1 || c.k0 > c.n0) {
    throw InconsistentCounts("pair counts are inconsistent");
  }
}

}  // namespace

Rational exact_score(const SufficientStats& stats) {
  Rational s = 1;
  for (const auto& per_vertex : stats.counts) {
    for (const Count& c : per_vertex) {
      if (c.k > c.n) throw InconsistentCounts("k exceeds n");
      s *= exact_term(c);
    }
  }
  return s;
}

Rational exact_bayes_factor_independent_vs_dependent(const PairCounts& c) {
  check_pair(c);
  return exact_term({c.n, c.k}) / (exact_term({c.n1, c.k1}) * exact_term({c.n0, c.k0}));
}

double dependence_rate(double d) {
  if (!(d >= 0.0 && d <= 1.0)) throw DomainError("d must lie in [0, 1]");
  auto xlogx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
  return 0.5 * (xlogx(1.0 + d) + xlogx(1.0 - d));
}

std::vector<EvidenceCurvePoint> weight_of_evidence_experiment(const EvidenceExperiment& config,
                                                              const RandomTape& tape) {
  if (config.trials < 1) throw DomainError("trials must be at least 1");
  if (!config.independent && !config.prior_drawn && !(config.d > 0.0 && config.d <= 1.0)) {
    throw DomainError("d must lie in (0, 1]");
  }
  const double p1 = 0.5 * (1.0 + config.d);
  const double p0 = 0.5 * (1.0 - config.d);
  std::vector<double> sum(config.n_max, 0.0);
  std::vector<double> sum_sq(config.n_max, 0.0);
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    RandomTape trial = split_tape(tape, t);
    double px = 0.5, py1 = p1, py0 = p0;
    if (config.prior_drawn) {
      px = trial.uniform01();
      py1 = trial.uniform01();
      py0 = config.independent ? py1 : trial.uniform01();
    } else if (config.independent) {
      py1 = py0 = 0.5;
    }
    PairCounts c;
    for (std::uint64_t i = 0; i < config.n_max; ++i) {
      const bool x = trial.bernoulli(px);
      const bool y = trial.bernoulli(x ? py1 : py0);
      c.add(x, y);
      const double r = log_bayes_factor_independent_vs_dependent(c);
      sum[i] += r;
      sum_sq[i] += r * r;
    }
  }
  std::vector<EvidenceCurvePoint> out(config.n_max);
  const double m = static_cast<double>(config.trials);
  for (std::uint64_t i = 0; i < config.n_max; ++i) {
    const double mean = sum[i] / m;
    double se = 0.0;
    if (config.trials > 1) {
      const double var = std::max(0.0, (sum_sq[i] - m * mean * mean) / (m - 1.0));
      se = std::sqrt(var / m);
    }
    out[i] = EvidenceCurvePoint{i + 1, mean, se};
  }
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("slope fit needs distinct x values");
  return sxy / sxx;
}

}  // namespace querysim
