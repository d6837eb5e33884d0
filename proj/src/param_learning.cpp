// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/param_learning.hpp"

#include <cmath>
#include <ostream>

#include "querysim/csv.hpp"
#include "querysim/errors.hpp"

namespace querysim {

BetaParams beta_posterior_from_counts(std::uint64_t k, std::uint64_t n) {
  if (k > n) throw CountMismatch("k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  return BetaParams{static_cast<double>(k) + 1.0, static_cast<double>(n - k) + 1.0};
}

double beta_density(const BetaParams& params, double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("beta density is defined on (0, 1)");
  if (!(params.a1 > 0.0 && params.a0 > 0.0)) throw DomainError("beta parameters must be positive");
  const double log_norm =
      std::lgamma(params.a1 + params.a0) - std::lgamma(params.a1) - std::lgamma(params.a0);
  return std::exp(log_norm + (params.a1 - 1.0) * std::log(x) + (params.a0 - 1.0) * std::log1p(-x));
}

DiagnosisParams sample_uniform_params(const DiagnosisParams& shape, RandomTape& tape) {
  DiagnosisParams p;
  p.disease_names = shape.disease_names;
  p.symptom_names = shape.symptom_names;
  p.prevalence.resize(shape.num_diseases());
  p.leak.resize(shape.num_symptoms());
  p.cause.assign(shape.num_diseases(), std::vector<double>(shape.num_symptoms()));
  for (double& v : p.prevalence) v = tape.uniform01();
  for (double& v : p.leak) v = tape.uniform01();
  for (auto& row : p.cause) {
    for (double& v : row) v = tape.uniform01();
  }
  return p;
}

std::vector<DiagnosisSample> sample_patients(const DiagnosisParams& params, std::size_t count,
                                             RandomTape& tape) {
  std::vector<DiagnosisSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_ds(params, tape));
  return out;
}

DsPrimeSample sample_ds_prime(const DiagnosisParams& shape, std::size_t n_records, RandomTape& tape) {
  DsPrimeSample s;
  s.params = sample_uniform_params(shape, tape);
  s.patients = sample_patients(s.params, n_records + 1, tape);
  return s;
}

GenerativeProgram<DsPrimeSample> ds_prime_program(DiagnosisParams shape, std::size_t n_records) {
  shape.validate();
  return make_program<DsPrimeSample>([shape = std::move(shape), n_records](RandomTape& tape) {
    return sample_ds_prime(shape, n_records, tape);
  });
}

Predicate<DsPrimeSample> os_prime_predicate(HistoricalRecords records, DiagnosisEvidence current) {
  return [records = std::move(records), current = std::move(current)](const DsPrimeSample& s,
                                                                      RandomTape&) {
    if (s.patients.size() != records.size() + 1) {
      throw DomainError("sample holds " + std::to_string(s.patients.size()) + " patients, expected " +
                        std::to_string(records.size() + 1));
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!records[i].matches(s.patients[i])) return false;
    }
    return current.matches(s.patients.back());
  };
}

BetaParams closed_form_disease_posterior(const HistoricalRecords& records, std::size_t disease) {
  std::uint64_t k = 0, n = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (disease >= r.diseases().size()) throw DomainError("disease index out of range");
    if (const auto& d = r.diseases()[disease]) {
      ++n;
      k += *d ? 1 : 0;
      continue;
    }
    for (const auto& s : r.symptoms()) {
      if (s) {
        throw NoClosedForm("record " + std::to_string(i + 1) +
                           " observes symptoms but not the disease");
      }
    }
  }
  return beta_posterior_from_counts(k, n);
}

std::vector<PosteriorSummary> posterior_summaries(const DiagnosisParams& shape,
                                                  const HistoricalRecords& records) {
  std::vector<PosteriorSummary> rows;
  for (std::size_t j = 0; j < shape.num_diseases(); ++j) {
    BetaParams b;
    try {
      b = closed_form_disease_posterior(records, j);
    } catch (const NoClosedForm&) {
      continue;
    }
    const auto k = static_cast<std::uint64_t>(b.a1 - 1.0);
    const auto n = static_cast<std::uint64_t>(b.a1 + b.a0 - 2.0);
    rows.push_back({"p" + std::to_string(j + 1), k, n, b.mean(), b.variance()});
  }
  return rows;
}

void write_posterior_csv(std::ostream& out, const std::vector<PosteriorSummary>& rows) {
  write_csv_row(out, {"parameter", "k", "n", "post_mean", "post_var"});
  for (const auto& r : rows) {
    write_csv_row(out, {r.parameter, format_number(r.k), format_number(r.n),
                        format_number(r.post_mean), format_number(r.post_var)});
  }
}

}  // namespace querysim
