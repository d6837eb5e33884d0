// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "querysim/param_learning.hpp"

namespace querysim {
namespace {

// Simpson's rule on [0, 1] with 2m intervals.
template <class F>
double simpson(F f, int m = 4000) {
  const double h = 1.0 / (2 * m);
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < 2 * m; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
  return s * h / 3;
}

DiagnosisParams one_by_one() {
  DiagnosisParams p;
  p.disease_names = {"D"};
  p.symptom_names = {"S"};
  p.prevalence = {0.5};
  p.leak = {0.1};
  p.cause = {{0.9}};
  return p;
}

TEST(Beta, PosteriorFromCounts) {
  const auto b = beta_posterior_from_counts(3, 10);
  EXPECT_DOUBLE_EQ(b.a1, 4.0);
  EXPECT_DOUBLE_EQ(b.a0, 8.0);
  EXPECT_DOUBLE_EQ(b.mean(), 4.0 / 12.0);
  EXPECT_DOUBLE_EQ(b.variance(), 32.0 / (144.0 * 13.0));
  EXPECT_THROW(beta_posterior_from_counts(4, 3), CountMismatch);
}

TEST(Beta, MatchesLikelihoodTimesUniformPrior) {
  for (auto [k, n] : {std::pair{0, 0}, {0, 5}, {2, 7}, {9, 9}, {13, 30}}) {
    auto lik = [&](double p) { return std::pow(p, k) * std::pow(1 - p, n - k); };
    const double z = simpson(lik);
    const double m1 = simpson([&](double p) { return p * lik(p); }) / z;
    const double m2 = simpson([&](double p) { return p * p * lik(p); }) / z;
    const auto b = beta_posterior_from_counts(k, n);
    EXPECT_NEAR(b.mean(), m1, 1e-9);
    EXPECT_NEAR(b.variance(), m2 - m1 * m1, 1e-9);
  }
}

TEST(Beta, DensityIntegratesToOne) {
  const BetaParams b{3.0, 5.0};
  const double total = simpson([&](double x) { return x <= 0 || x >= 1 ? 0.0 : beta_density(b, x); });
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_NEAR(beta_density({1.0, 1.0}, 0.3), 1.0, 1e-12);
  EXPECT_THROW(beta_density(b, 0.0), DomainError);
  EXPECT_THROW(beta_density({0.0, 1.0}, 0.5), DomainError);
}

TEST(ParamLearning, ClosedFormFromDiseaseOnlyRecords) {
  const auto shape = one_by_one();
  HistoricalRecords records;
  for (int i = 0; i < 7; ++i) records.push_back(DiagnosisEvidence::parse(shape, i < 2 ? "D1=1" : "D1=0"));
  records.push_back(DiagnosisEvidence::parse(shape, ""));  // says nothing
  const auto b = closed_form_disease_posterior(records, 0);
  EXPECT_DOUBLE_EQ(b.a1, 3.0);
  EXPECT_DOUBLE_EQ(b.a0, 6.0);

  records.push_back(DiagnosisEvidence::parse(shape, "S1=1"));
  EXPECT_THROW(closed_form_disease_posterior(records, 0), NoClosedForm);
  EXPECT_TRUE(posterior_summaries(shape, records).empty());
}

TEST(ParamLearning, SummariesCsv) {
  const auto shape = one_by_one();
  HistoricalRecords records{DiagnosisEvidence::parse(shape, "D1=1"), DiagnosisEvidence::parse(shape, "D1=0")};
  std::ostringstream out;
  write_posterior_csv(out, posterior_summaries(shape, records));
  EXPECT_EQ(out.str(), "parameter,k,n,post_mean,post_var\np1,1,2,0.5,0.05\n");
}

TEST(ParamLearning, UniformParamsKeepShape) {
  const auto& shape = table1_params();
  RandomTape t = make_tape(4);
  const auto p = sample_uniform_params(shape, t);
  EXPECT_EQ(p.disease_names, shape.disease_names);
  EXPECT_EQ(p.cause.size(), shape.num_diseases());
  EXPECT_NO_THROW(p.validate());
  const auto s = sample_ds_prime(shape, 4, t);
  EXPECT_EQ(s.patients.size(), 5u);
}

TEST(ParamLearning, RejectionAgreesWithClosedForm) {
  // 2 of 5 records have the disease: Beta(3, 4), mean 3/7.
  const auto shape = one_by_one();
  HistoricalRecords records;
  for (int i = 0; i < 5; ++i) records.push_back(DiagnosisEvidence::parse(shape, i < 2 ? "D1=1" : "D1=0"));
  QueryOptions opts;
  opts.samples = 4000;
  opts.seed = 12;
  const auto draws = query_samples(ds_prime_program(shape, records.size()),
                                   os_prime_predicate(records, DiagnosisEvidence(1, 1)), opts);
  double s = 0;
  for (const auto& d : draws) s += d.value.params.prevalence[0];
  const auto b = closed_form_disease_posterior(records, 0);
  EXPECT_NEAR(s / opts.samples, b.mean(), 4 * std::sqrt(b.variance() / opts.samples));
}

TEST(ParamLearning, PredicateChecksEveryRecord) {
  const auto shape = one_by_one();
  HistoricalRecords records{DiagnosisEvidence::parse(shape, "D1=1")};
  const auto pred = os_prime_predicate(records, DiagnosisEvidence::parse(shape, "S1=0"));
  DsPrimeSample s;
  s.params = shape;
  s.patients.resize(2);
  s.patients[0].diseases = 1;
  s.patients[1].symptoms = 0;
  RandomTape t = make_tape(0);
  EXPECT_TRUE(pred(s, t));
  s.patients[0].diseases = 0;
  EXPECT_FALSE(pred(s, t));
  s.patients[0].diseases = 1;
  s.patients[1].symptoms = 1;
  EXPECT_FALSE(pred(s, t));
}

}  // namespace
}  // namespace querysim
