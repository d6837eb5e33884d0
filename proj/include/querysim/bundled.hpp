// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

// Data files compiled into the library, so results do not depend on the working directory.
namespace querysim::bundled {

/// The fabricated 11-disease, 7-symptom diagnosis table.
std::string_view table1_model();

/// The wait / test / inject belief-state example.
std::string_view fig4_model();

/// Target values and seeds for `querysim verify`.
std::string_view golden_manifest();

}  // namespace querysim::bundled
