// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "querysim/decision.hpp"
#include "querysim/diagnosis.hpp"
#include "querysim/structure.hpp"

namespace querysim {

/*!
 * Diagnosis model text:
 *
 *   [diseases]            rows: index name probability   (p_n, 1-based)
 *   [symptoms]            rows: index name probability   (l_m)
 *   [causes]              rows: disease symptom probability (c_{n,m})
 *
 * `#` starts a comment. Names may contain spaces. Cause pairs that are not
 * listed are 0. Errors raise ParseError with the line number.
 */
DiagnosisParams parse_diagnosis_model(std::string_view text);
DiagnosisParams load_diagnosis_model(const std::filesystem::path& path);
std::string format_diagnosis_model(const DiagnosisParams& params);

/*!
 * Belief model text:
 *
 *   [states]      rows: index name                 (index 0 is the root)
 *   [edges]       rows: state action target prob [target prob ...]
 *   [terminals]   rows: name success|failure
 *   [horizon]     optional single row: M
 *
 * States are referred to by name after [states].
 */
BeliefStateModel parse_belief_model(std::string_view text);
BeliefStateModel load_belief_model(const std::filesystem::path& path);
std::string format_belief_model(const BeliefStateModel& model);

/// One row per line of space-separated 0/1 values. `width` is enforced if given.
Dataset parse_dataset(std::string_view text, std::optional<std::size_t> width = std::nullopt);
Dataset load_dataset(const std::filesystem::path& path,
                     std::optional<std::size_t> width = std::nullopt);
std::string format_dataset(const Dataset& data);

/// Whole file as text; Error if it cannot be read.
std::string read_text_file(const std::filesystem::path& path);

/// Strict decimal probability in [0, 1]; nullopt on anything else.
std::optional<double> parse_probability(std::string_view token);

}  // namespace querysim
