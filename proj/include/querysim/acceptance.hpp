// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "querysim/decision.hpp"
#include "querysim/diagnosis.hpp"

namespace querysim {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<std::pair<std::string, std::string>> metrics;  // name, formatted value
  std::vector<std::string> failures;                         // which checks failed
};

/*!
 * Inputs to the golden-number suite. Everything defaults to the bundled
 * data; the models can be swapped to see which checks are sensitive.
 */
struct AcceptanceConfig {
  std::optional<DiagnosisParams> diagnosis_model;
  std::optional<BeliefStateModel> belief_model;
  std::optional<std::string> manifest;  // JSON text
  std::set<int> only;                   // empty: every criterion
};

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config = {});

/// One "criterion N [PASS|FAIL] title" line per criterion, then indented metrics.
/// Contains no timings, so equal inputs give byte-identical text.
std::string format_report(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace querysim
