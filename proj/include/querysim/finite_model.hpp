// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "querysim/errors.hpp"

namespace querysim {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kMassTolerance = 1e-12;

template <class W>
double to_double(const W& w) {
  if constexpr (std::is_floating_point_v<W>) {
    return static_cast<double>(w);
  } else {
    return w.template convert_to<double>();
  }
}

/*!
 * A finite distribution given as an explicit list of (outcome, probability)
 * atoms. W is double, or Rational when exact arithmetic is wanted. Duplicate
 * outcomes are allowed and their weights add.
 */
template <class T, class W = double>
class FiniteModel {
 public:
  using Atom = std::pair<T, W>;

  FiniteModel() = default;

  explicit FiniteModel(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    W sum{0};
    for (const auto& [x, w] : atoms_) {
      if (w < W{0}) throw InvalidModel("negative probability in finite model");
      sum += w;
    }
    if constexpr (std::is_floating_point_v<W>) {
      if (std::abs(sum - W{1}) > kMassTolerance) {
        throw InvalidModel("finite model probabilities do not sum to 1");
      }
    } else {
      if (sum != W{1}) throw InvalidModel("finite model probabilities do not sum to 1");
    }
  }

  static FiniteModel uniform(const std::vector<T>& support) {
    if (support.empty()) throw InvalidModel("uniform model over an empty support");
    std::vector<Atom> atoms;
    atoms.reserve(support.size());
    const W w = W{1} / W(support.size());
    for (const auto& x : support) atoms.emplace_back(x, w);
    return FiniteModel(std::move(atoms));
  }

  /// Normalizes nonnegative weights; ZeroMassCondition if they are all zero.
  static FiniteModel from_weights(std::vector<Atom> weighted) {
    W total{0};
    for (const auto& a : weighted) total += a.second;
    if (!(total > W{0})) throw ZeroMassCondition("condition has zero probability");
    for (auto& a : weighted) a.second /= total;
    FiniteModel m;
    m.atoms_ = std::move(weighted);
    return m;
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  W probability(const T& x) const {
    W p{0};
    for (const auto& [y, w] : atoms_) {
      if (y == x) p += w;
    }
    return p;
  }

  template <class Pred>
  W mass(Pred&& pred) const {
    W p{0};
    for (const auto& [y, w] : atoms_) {
      if (pred(y)) p += w;
    }
    return p;
  }

  /// Pushforward through f, merging equal images (U must be ordered).
  template <class F>
  auto map(F&& f) const {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    std::map<U, W> merged;
    for (const auto& [x, w] : atoms_) merged[f(x)] += w;
    std::vector<std::pair<U, W>> out(merged.begin(), merged.end());
    return FiniteModel<U, W>::from_weights(std::move(out));
  }

 private:
  std::vector<Atom> atoms_;
};

/*!
 * Exact conditioning of a finite model on a deterministic predicate: the
 * restriction to accepted outcomes, renormalized.
 */
template <class T, class W, class Pred>
FiniteModel<T, W> enumerate_posterior(const FiniteModel<T, W>& m, Pred&& accept) {
  std::vector<std::pair<T, W>> kept;
  for (const auto& [x, w] : m.atoms()) {
    if (accept(x)) kept.emplace_back(x, w);
  }
  W total{0};
  for (const auto& a : kept) total += a.second;
  if (!(total > W{0})) throw ZeroMassCondition("no outcome of the model is accepted");
  return FiniteModel<T, W>::from_weights(std::move(kept));
}

/// Counts of observed outcomes.
template <class T>
class Empirical {
 public:
  Empirical() = default;

  template <class It>
  Empirical(It first, It last) {
    for (; first != last; ++first) add(*first);
  }

  void add(const T& x, std::uint64_t times = 1) {
    counts_[x] += times;
    total_ += times;
  }

  std::uint64_t total() const noexcept { return total_; }
  const std::map<T, std::uint64_t>& counts() const noexcept { return counts_; }

  std::uint64_t count(const T& x) const {
    auto it = counts_.find(x);
    return it == counts_.end() ? 0 : it->second;
  }

  double frequency(const T& x) const {
    return total_ == 0 ? 0.0 : static_cast<double>(count(x)) / static_cast<double>(total_);
  }

 private:
  std::map<T, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

namespace detail {

template <class T>
double half_l1(const std::map<T, double>& a, const std::map<T, double>& b) {
  double sum = 0.0;
  for (const auto& [x, p] : a) {
    auto it = b.find(x);
    sum += std::abs(p - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [x, q] : b) {
    if (!a.contains(x)) sum += q;
  }
  return 0.5 * sum;
}

template <class T>
std::map<T, double> as_map(const Empirical<T>& e) {
  std::map<T, double> m;
  for (const auto& [x, n] : e.counts()) m[x] = static_cast<double>(n) / static_cast<double>(e.total());
  return m;
}

template <class T, class W>
std::map<T, double> as_map(const FiniteModel<T, W>& f) {
  std::map<T, double> m;
  for (const auto& [x, w] : f.atoms()) m[x] += to_double(w);
  return m;
}

}  // namespace detail

/// Total variation distance: half the L1 distance between the mass functions.
template <class T, class W>
double total_variation(const Empirical<T>& sampled, const FiniteModel<T, W>& exact) {
  return detail::half_l1(detail::as_map(sampled), detail::as_map(exact));
}

template <class T>
double total_variation(const Empirical<T>& a, const Empirical<T>& b) {
  return detail::half_l1(detail::as_map(a), detail::as_map(b));
}

template <class T, class W>
double total_variation(const FiniteModel<T, W>& a, const FiniteModel<T, W>& b) {
  return detail::half_l1(detail::as_map(a), detail::as_map(b));
}

}  // namespace querysim
