// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <string>

#include "querysim/bundled.hpp"
#include "querysim/csv.hpp"
#include "querysim/model_io.hpp"

namespace querysim {
namespace {

void expect_same(const DiagnosisParams& a, const DiagnosisParams& b) {
  EXPECT_EQ(a.disease_names, b.disease_names);
  EXPECT_EQ(a.symptom_names, b.symptom_names);
  EXPECT_EQ(a.prevalence, b.prevalence);
  EXPECT_EQ(a.leak, b.leak);
  EXPECT_EQ(a.cause, b.cause);
}

TEST(DiagnosisFile, BundledIsTable1) {
  const auto p = parse_diagnosis_model(bundled::table1_model());
  expect_same(p, table1_params());
  EXPECT_EQ(p.symptom_names[2], "Hard breathing");
  EXPECT_EQ(p.prevalence[5], 0.08);
}

TEST(DiagnosisFile, RoundTrip) {
  const auto& p = table1_params();
  expect_same(parse_diagnosis_model(format_diagnosis_model(p)), p);
}

TEST(DiagnosisFile, MissingCausesAreZero) {
  const auto p = parse_diagnosis_model(
      "[diseases]\n1 A 0.5\n2 B 0.25 # comment\n[symptoms]\n1 X 0.1\n[causes]\n2 1 0.75\n");
  EXPECT_EQ(p.cause[0][0], 0.0);
  EXPECT_EQ(p.cause[1][0], 0.75);
}

TEST(DiagnosisFile, Errors) {
  const std::string head = "[diseases]\n1 A 0.5\n[symptoms]\n1 X 0.1\n[causes]\n";
  EXPECT_THROW(parse_diagnosis_model(head + "1 1 0.5\n1 1 0.6\n"), ParseError);  // duplicate
  EXPECT_THROW(parse_diagnosis_model(head + "2 1 0.5\n"), ParseError);           // no disease 2
  EXPECT_THROW(parse_diagnosis_model(head + "1 1 1.5\n"), ParseError);
  EXPECT_THROW(parse_diagnosis_model(head + "1 1 0.5x\n"), ParseError);
  EXPECT_THROW(parse_diagnosis_model("1 A 0.5\n"), ParseError);                  // no section
  EXPECT_THROW(parse_diagnosis_model("[diseases]\n2 A 0.5\n[symptoms]\n1 X 0.1\n"), ParseError);
  try {
    parse_diagnosis_model(head + "1 1 nope\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6u);
  }
}

TEST(BeliefFile, BundledRoundTrip) {
  const auto m = parse_belief_model(bundled::fig4_model());
  ASSERT_EQ(m.size(), 5u);
  EXPECT_EQ(m.state(0).name, "start");
  EXPECT_EQ(m.state(0).actions.size(), 3u);
  const auto again = parse_belief_model(format_belief_model(m));
  EXPECT_EQ(format_belief_model(again), format_belief_model(m));
  EXPECT_EQ(again.horizon(), m.horizon());
}

TEST(BeliefFile, HorizonSection) {
  const std::string text =
      "[states]\n0 a\n1 win\n2 lose\n[edges]\na STAY a 0.5 win 0.5\na QUIT lose 1\n"
      "[terminals]\nwin success\nlose failure\n";
  EXPECT_THROW(parse_belief_model(text), InvalidModel);
  const auto m = parse_belief_model(text + "[horizon]\n4\n");
  EXPECT_EQ(m.horizon(), 4u);
  EXPECT_FALSE(m.is_acyclic());
}

TEST(BeliefFile, Errors) {
  EXPECT_THROW(parse_belief_model("[states]\n0 a\n[edges]\na GO nowhere 1\n"), ParseError);
  EXPECT_THROW(parse_belief_model("[states]\n0 a\n0 b\n"), ParseError);
  EXPECT_THROW(parse_belief_model("[terminals]\nx maybe\n"), ParseError);
}

TEST(DatasetFile, ParseAndFormat) {
  const auto d = parse_dataset("# x y\n1 0\n0 1\n\n1 1\n");
  EXPECT_EQ(d.width, 2u);
  EXPECT_EQ(d.rows, (std::vector<VertexMask>{1, 2, 3}));
  EXPECT_EQ(parse_dataset(format_dataset(d)).rows, d.rows);
  EXPECT_THROW(parse_dataset("1 0\n1\n"), WidthMismatch);
  EXPECT_THROW(parse_dataset("1 0\n", 3), WidthMismatch);
  EXPECT_THROW(parse_dataset("1 2\n"), ParseError);
  std::string wide;
  for (int i = 0; i < 33; ++i) wide += "0 ";
  EXPECT_THROW(parse_dataset(wide + "\n"), DimensionTooLarge);
  EXPECT_EQ(parse_dataset("", 3).rows.size(), 0u);
}

TEST(Probability, StrictDecimal) {
  EXPECT_EQ(parse_probability("0.125"), std::optional<double>(0.125));
  EXPECT_EQ(parse_probability("1"), std::optional<double>(1.0));
  EXPECT_EQ(parse_probability(".5"), std::optional<double>(0.5));
  EXPECT_FALSE(parse_probability("1e-3").has_value());
  EXPECT_FALSE(parse_probability("-0.1").has_value());
  EXPECT_FALSE(parse_probability("1.01").has_value());
  EXPECT_FALSE(parse_probability("").has_value());
  EXPECT_FALSE(parse_probability("0.5.1").has_value());
}

TEST(Csv, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3, 42.504734299516841, 1e-300, 0.0}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_fixed(0.7679324894, 6), "0.767932");
  EXPECT_EQ(split_csv_row("a,,b"), (std::vector<std::string>{"a", "", "b"}));
  std::ostringstream out;
  write_csv_row(out, {"x", "1"});
  EXPECT_EQ(out.str(), "x,1\n");
}

TEST(Files, MissingFile) {
  EXPECT_THROW(read_text_file("/nonexistent/querysim.model"), Error);
}

}  // namespace
}  // namespace querysim
