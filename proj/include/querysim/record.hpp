// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "querysim/errors.hpp"

namespace querysim {

/// A latent or output value: boolean, bounded integer or unit-interval real.
using Value = std::variant<bool, std::int64_t, double>;

/*!
 * Flat record of named values produced by a generative program. Field order
 * is insertion order; comparison is lexicographic over (name, value) pairs so
 * records can key empirical distributions.
 */
class Record {
 public:
  Record() = default;
  Record(std::initializer_list<std::pair<std::string, Value>> fields) : fields_(fields) {}

  Record& set(std::string_view name, Value v) {
    for (auto& [n, existing] : fields_) {
      if (n == name) {
        existing = v;
        return *this;
      }
    }
    fields_.emplace_back(std::string(name), v);
    return *this;
  }

  bool has(std::string_view name) const noexcept { return find(name) != nullptr; }

  const Value& at(std::string_view name) const {
    if (const Value* v = find(name)) return *v;
    throw DomainError("record has no field '" + std::string(name) + "'");
  }

  template <class T>
  T get(std::string_view name) const {
    const Value& v = at(name);
    if (const T* p = std::get_if<T>(&v)) return *p;
    throw DomainError("field '" + std::string(name) + "' has a different type");
  }

  const std::vector<std::pair<std::string, Value>>& fields() const noexcept { return fields_; }
  std::size_t size() const noexcept { return fields_.size(); }

  auto operator<=>(const Record&) const = default;
  bool operator==(const Record&) const = default;

 private:
  const Value* find(std::string_view name) const noexcept {
    for (const auto& [n, v] : fields_) {
      if (n == name) return &v;
    }
    return nullptr;
  }

  std::vector<std::pair<std::string, Value>> fields_;
};

}  // namespace querysim
