// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

// Runs the golden-number suite and prints one line per criterion.
// Criterion 10 reruns the suite and compares the two reports byte for byte.

#include <cstdio>
#include <iostream>

#include "querysim/acceptance.hpp"

int main() {
  using namespace querysim;
  const auto first = run_acceptance();
  const auto second = run_acceptance();
  const std::string report = format_report(first);
  const bool same = report == format_report(second);

  std::cout << report << '\n';
  for (const auto& r : first) {
    std::printf("[%s] criterion %d: %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str());
  }
  std::printf("[%s] criterion 10: determinism (two runs byte-identical)\n", same ? "PASS" : "FAIL");
  return all_passed(first) && same ? 0 : 1;
}
