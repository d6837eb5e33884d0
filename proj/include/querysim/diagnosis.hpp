// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "querysim/finite_model.hpp"
#include "querysim/query.hpp"
#include "querysim/record.hpp"
#include "querysim/tape.hpp"

namespace querysim {

class Dag;

/// Sampling works on bitmasks, so both dimensions are capped at 32.
inline constexpr std::size_t kMaxDiagnosisDim = 32;
/// Exact enumeration sums over 2^Nd disease vectors.
inline constexpr std::size_t kMaxEnumeratedDiseases = 24;

/// Disease and symptom vectors are bitmasks: bit n is variable n (0-based).
using DiseaseMask = std::uint32_t;
using SymptomMask = std::uint32_t;

/*!
 * Parameters of the noisy-OR disease/symptom model: disease marginals p_n,
 * leak probabilities l_m and cause probabilities c_{n,m}.
 */
struct DiagnosisParams {
  std::vector<std::string> disease_names;
  std::vector<std::string> symptom_names;
  std::vector<double> prevalence;          // p_n
  std::vector<double> leak;                // l_m
  std::vector<std::vector<double>> cause;  // c_{n,m}, [disease][symptom]

  std::size_t num_diseases() const noexcept { return prevalence.size(); }
  std::size_t num_symptoms() const noexcept { return leak.size(); }

  /// Throws InvalidModel on inconsistent shapes or entries outside [0, 1].
  void validate() const;

  /// Index of a disease or symptom by (case-insensitive) name, if present.
  std::optional<std::size_t> disease_index(std::string_view name) const;
  std::optional<std::size_t> symptom_index(std::string_view name) const;
};

/// The bundled fabricated 11-disease, 7-symptom table.
const DiagnosisParams& table1_params();

/// One run of the model, latents included.
struct DiagnosisSample {
  DiseaseMask diseases = 0;
  SymptomMask symptoms = 0;
  SymptomMask leaks = 0;
  std::vector<SymptomMask> causes;  // causes[n] bit m is C_{n,m}
  std::size_t num_symptoms = 0;

  bool disease(std::size_t n) const noexcept { return (diseases >> n) & 1u; }
  bool symptom(std::size_t m) const noexcept { return (symptoms >> m) & 1u; }

  /// Named view: D1.., S1.., L1.., C1_1.. (1-based, as in the tables).
  Record to_record() const;
};

/// S_m == max(L_m, D_1 C_{1,m}, ..., D_N C_{N,m}) for every m.
bool satisfies_noisy_or(const DiagnosisSample& s);

/// Draws D, then L, then C row by row from the tape, and derives S.
DiagnosisSample sample_ds(const DiagnosisParams& params, RandomTape& tape);

GenerativeProgram<DiagnosisSample> ds_program(DiagnosisParams params);

/// 1 - (1 - l_m) * prod_{n in d} (1 - c_{n,m}).
double symptom_prob_given_diseases(const DiagnosisParams& params, std::size_t m, DiseaseMask d);

/// Tri-state observation of each disease and symptom.
class DiagnosisEvidence {
 public:
  DiagnosisEvidence() = default;
  DiagnosisEvidence(std::size_t num_diseases, std::size_t num_symptoms)
      : diseases_(num_diseases), symptoms_(num_symptoms) {}

  /*!
   * Parses whitespace separated assignments such as "S1=1 S7=1 D8=0"
   * (1-based indices) or "Fever=1". Unknown names raise DomainError.
   */
  static DiagnosisEvidence parse(const DiagnosisParams& params, std::string_view text);

  DiagnosisEvidence& observe_disease(std::size_t n, bool value);
  DiagnosisEvidence& observe_symptom(std::size_t m, bool value);

  const std::vector<std::optional<bool>>& diseases() const noexcept { return diseases_; }
  const std::vector<std::optional<bool>>& symptoms() const noexcept { return symptoms_; }

  bool empty() const noexcept;
  bool matches(const DiagnosisSample& s) const noexcept;
  bool matches(DiseaseMask d, SymptomMask s) const noexcept;

  /// Conjunction of both observations; nullopt if they contradict.
  std::optional<DiagnosisEvidence> merged_with(const DiagnosisEvidence& other) const;

  std::string to_string() const;

 private:
  std::vector<std::optional<bool>> diseases_;
  std::vector<std::optional<bool>> symptoms_;
};

/// Accepts exactly the samples agreeing with every observed variable.
Predicate<DiagnosisSample> evidence_predicate(DiagnosisEvidence ev);

/*!
 * P(D = d | ev) for every disease vector d, by summing over all 2^Nd
 * assignments; symptoms are conditionally independent given d.
 */
FiniteModel<DiseaseMask> exact_posterior(const DiagnosisParams& params,
                                         const DiagnosisEvidence& ev);

/// Unnormalized P(ev), by the same enumeration.
double evidence_probability(const DiagnosisParams& params, const DiagnosisEvidence& ev);

/// P(target | given), exactly.
double forward_prob(const DiagnosisParams& params, const DiagnosisEvidence& target,
                    const DiagnosisEvidence& given);

/// P(D_n = 1 | ev) for each disease.
std::vector<double> posterior_marginals(const DiagnosisParams& params,
                                        const DiagnosisEvidence& ev);

/// Full joint over (diseases, symptoms): 2^(Nd+Ns) atoms, latents summed out.
FiniteModel<std::pair<DiseaseMask, SymptomMask>> ds_joint_model(const DiagnosisParams& params);

/// Complete bipartite graph diseases -> symptoms (vertices 0..Nd-1, then symptoms).
Dag diagnosis_graph(std::size_t num_diseases, std::size_t num_symptoms);

}  // namespace querysim
