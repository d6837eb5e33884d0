// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "querysim/diagnosis.hpp"
#include "querysim/query.hpp"
#include "querysim/tape.hpp"

namespace querysim {

/// Beta(a1, a0) with density proportional to x^(a1-1) (1-x)^(a0-1).
struct BetaParams {
  double a1 = 1.0;
  double a0 = 1.0;

  double mean() const noexcept { return a1 / (a1 + a0); }
  double concentration() const noexcept { return a1 + a0; }
  double variance() const noexcept {
    const double s = a1 + a0;
    return a1 * a0 / (s * s * (s + 1.0));
  }
};

/// Posterior of a Bernoulli rate under a uniform prior after k successes in n: Beta(k+1, n-k+1).
BetaParams beta_posterior_from_counts(std::uint64_t k, std::uint64_t n);

/// DomainError unless 0 < x < 1 and both parameters are positive.
double beta_density(const BetaParams& params, double x);

using HistoricalRecords = std::vector<DiagnosisEvidence>;

/// A parameter table drawn from the uniform prior plus the patients generated from it.
struct DsPrimeSample {
  DiagnosisParams params;
  std::vector<DiagnosisSample> patients;  // records first, current patient last
};

/// Every p_n, l_m, c_{n,m} drawn from Uniform[0,1]; names and sizes are copied from `shape`.
DiagnosisParams sample_uniform_params(const DiagnosisParams& shape, RandomTape& tape);

/// `count` independent patients of the fixed model `params`.
std::vector<DiagnosisSample> sample_patients(const DiagnosisParams& params, std::size_t count,
                                             RandomTape& tape);

/// Random tables, then n_records + 1 patients.
DsPrimeSample sample_ds_prime(const DiagnosisParams& shape, std::size_t n_records, RandomTape& tape);

GenerativeProgram<DsPrimeSample> ds_prime_program(DiagnosisParams shape, std::size_t n_records);

/*!
 * Accepts iff patient i agrees with records[i] on every variable the record
 * observes, and the last patient agrees with `current`. Unobserved entries
 * are unconstrained.
 */
Predicate<DsPrimeSample> os_prime_predicate(HistoricalRecords records, DiagnosisEvidence current);

/*!
 * Exact posterior of p_j given the records: Beta(k+1, n-k+1) over the records
 * observing D_j. Records that leave D_j unobserved must observe no symptom
 * (then they carry no information on p_j); otherwise NoClosedForm.
 */
BetaParams closed_form_disease_posterior(const HistoricalRecords& records, std::size_t disease);

struct PosteriorSummary {
  std::string parameter;
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  double post_mean = 0.0;
  double post_var = 0.0;
};

/// One row per disease admitting a closed form.
std::vector<PosteriorSummary> posterior_summaries(const DiagnosisParams& shape,
                                                  const HistoricalRecords& records);

/// Header "parameter,k,n,post_mean,post_var", then one row per summary.
void write_posterior_csv(std::ostream& out, const std::vector<PosteriorSummary>& rows);

}  // namespace querysim
