// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

// Python bindings: thin wrappers that take and return plain Python values.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "querysim/acceptance.hpp"
#include "querysim/bundled.hpp"
#include "querysim/computable.hpp"
#include "querysim/decision.hpp"
#include "querysim/diagnosis.hpp"
#include "querysim/model_io.hpp"
#include "querysim/param_learning.hpp"
#include "querysim/programs.hpp"
#include "querysim/structure.hpp"

namespace py = pybind11;
using namespace querysim;

namespace {

DiagnosisParams diagnosis_or_default(const std::optional<std::string>& text) {
  return parse_diagnosis_model(text ? std::string_view(*text) : bundled::table1_model());
}

BeliefStateModel belief_or_default(const std::optional<std::string>& text) {
  return parse_belief_model(text ? std::string_view(*text) : bundled::fig4_model());
}

DiseaseMask mask_of(const std::vector<std::size_t>& diseases) {
  DiseaseMask m = 0;
  for (std::size_t d : diseases) {
    if (d < 1 || d > kMaxDiagnosisDim) throw DomainError("disease indices are 1-based");
    m |= DiseaseMask{1} << (d - 1);
  }
  return m;
}

Dag dag_of(const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t vertices) {
  Dag g(vertices);
  for (auto [p, c] : edges) g.add_edge(p, c);
  return g;
}

Dataset dataset_of(const std::vector<std::vector<int>>& rows, std::size_t width) {
  Dataset d;
  d.width = width;
  for (const auto& r : rows) {
    if (r.size() != width) throw WidthMismatch("row width differs from the dataset width");
    VertexMask m = 0;
    for (std::size_t j = 0; j < width; ++j) m |= static_cast<VertexMask>(r[j] != 0) << j;
    d.rows.push_back(m);
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conditional simulation by rejection, with exact enumeration oracles.";

  static py::exception<Error> base(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ZeroMassCondition>(m, "ZeroMassCondition", base.ptr());
  py::register_exception<DimensionTooLarge>(m, "DimensionTooLarge", base.ptr());
  py::register_exception<CyclicBeliefGraph>(m, "CyclicBeliefGraph", base.ptr());
  py::register_exception<InvalidModel>(m, "InvalidModel", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());

  m.def("table1_model_text", [] { return std::string(bundled::table1_model()); });
  m.def("fig4_model_text", [] { return std::string(bundled::fig4_model()); });

  // ---- diagnosis ----
  m.def("disease_names", [](std::optional<std::string> model) { return diagnosis_or_default(model).disease_names; },
        py::arg("model") = py::none());
  m.def(
      "posterior_marginals",
      [](const std::string& evidence, std::optional<std::string> model) {
        const auto p = diagnosis_or_default(model);
        return posterior_marginals(p, DiagnosisEvidence::parse(p, evidence));
      },
      py::arg("evidence"), py::arg("model") = py::none(),
      "P(D_n = 1 | evidence) for every disease, by enumeration.");
  m.def(
      "posterior_odds",
      [](const std::string& evidence, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
         std::optional<std::string> model) {
        const auto p = diagnosis_or_default(model);
        const auto post = exact_posterior(p, DiagnosisEvidence::parse(p, evidence));
        return post.probability(mask_of(a)) / post.probability(mask_of(b));
      },
      py::arg("evidence"), py::arg("a"), py::arg("b"), py::arg("model") = py::none(),
      "Odds of exactly the diseases in a (1-based) against exactly those in b.");
  m.def(
      "sample_marginals",
      [](const std::string& evidence, std::uint64_t samples, std::uint64_t seed, std::optional<std::string> model) {
        const auto p = diagnosis_or_default(model);
        QueryOptions opts;
        opts.samples = samples;
        opts.seed = seed;
        std::vector<double> freq(p.num_diseases(), 0.0);
        py::gil_scoped_release release;
        for (const auto& d : query_samples(ds_program(p), evidence_predicate(DiagnosisEvidence::parse(p, evidence)), opts)) {
          for (std::size_t n = 0; n < freq.size(); ++n) freq[n] += d.value.disease(n);
        }
        for (double& f : freq) f /= static_cast<double>(samples);
        return freq;
      },
      py::arg("evidence"), py::arg("samples"), py::arg("seed"), py::arg("model") = py::none());

  // ---- parameter learning ----
  m.def(
      "beta_posterior_from_counts",
      [](std::uint64_t k, std::uint64_t n) {
        const auto b = beta_posterior_from_counts(k, n);
        return py::make_tuple(b.a1, b.a0);
      },
      py::arg("k"), py::arg("n"), "Beta(k + 1, n - k + 1) as (a1, a0).");
  m.def("beta_density", [](double a1, double a0, double x) { return beta_density({a1, a0}, x); });

  // ---- structure ----
  m.def("count_dags", [](std::size_t d) { return enumerate_dags(d).size(); });
  m.def(
      "d_separated",
      [](std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t x,
         std::size_t y, const std::vector<std::size_t>& given) { return d_separated(dag_of(edges, vertices), x, y, given); },
      py::arg("vertices"), py::arg("edges"), py::arg("x"), py::arg("y"), py::arg("given") = std::vector<std::size_t>{});
  m.def(
      "log_score",
      [](std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
         const std::vector<std::vector<int>>& rows) { return log_score(dag_of(edges, vertices), dataset_of(rows, vertices)); },
      py::arg("vertices"), py::arg("edges"), py::arg("rows"));
  m.def(
      "bayes_factor_independent_vs_dependent",
      [](const std::vector<std::vector<int>>& rows) {
        return bayes_factor_independent_vs_dependent(PairCounts::from_data(dataset_of(rows, 2)));
      },
      py::arg("rows"));
  m.def("dependence_rate", &dependence_rate);
  m.def(
      "evidence_curve",
      [](double d, std::uint64_t trials, std::uint64_t n_max, bool independent, bool prior_drawn, std::uint64_t seed) {
        EvidenceExperiment e;
        e.d = d;
        e.trials = trials;
        e.n_max = n_max;
        e.independent = independent;
        e.prior_drawn = prior_drawn;
        std::vector<std::tuple<std::uint64_t, double, double>> out;
        py::gil_scoped_release release;
        for (const auto& p : weight_of_evidence_experiment(e, make_tape(seed))) {
          out.emplace_back(p.n, p.mean_log_ratio, p.std_error);
        }
        return out;
      },
      py::arg("d") = 0.5, py::arg("trials") = 100, py::arg("n_max") = 2000, py::arg("independent") = false,
      py::arg("prior_drawn") = false, py::arg("seed") = 0,
      "Rows (n, mean log Bayes factor independent/dependent, standard error).");

  // ---- decisions ----
  m.def("multiplicative_choice_probability", &multiplicative_choice_probability);
  m.def("additive_choice_probability", &additive_choice_probability);
  m.def(
      "choice_frequency",
      [](const std::string& rule, double px, double py, std::uint64_t k, std::uint64_t samples, std::uint64_t seed) {
        if (rule != "multiplicative" && rule != "additive") throw DomainError("unknown rule " + rule);
        QueryOptions opts;
        opts.samples = samples;
        opts.seed = seed;
        py::gil_scoped_release release;
        return choice_frequency(rule == "multiplicative" ? ChoiceRule::kMultiplicative : ChoiceRule::kAdditive,
                                ActionSimulator::bernoulli(px), ActionSimulator::bernoulli(py), k, opts);
      },
      py::arg("rule"), py::arg("px"), py::arg("py"), py::arg("k"), py::arg("samples"), py::arg("seed"));
  m.def(
      "solve_policy",
      [](std::optional<std::uint64_t> k, std::optional<std::string> model) {
        const auto bm = belief_or_default(model);
        const auto sol = solve_policy(bm, k ? Amplification::power(*k) : Amplification::limit());
        py::dict out;
        for (std::size_t b = 0; b < bm.size(); ++b) {
          const auto& s = bm.state(b);
          if (s.terminal != Terminal::kNone) continue;
          py::dict row;
          for (std::size_t z = 0; z < s.actions.size(); ++z) row[py::str(s.actions[z].name)] = sol.policy.probs[b][z];
          out[py::str(s.name)] = py::make_tuple(row, sol.success[b]);
        }
        return out;
      },
      py::arg("k") = 1, py::arg("model") = py::none(),
      "{state: ({action: probability}, success probability)}; k=None is the argmax limit.");

  // ---- computable sampling and uniform conditioning ----
  m.def(
      "bernoulli_ratio",
      [](std::uint64_t num, std::uint64_t den, std::uint64_t samples, std::uint64_t seed) {
        const auto alpha = ComputableReal::ratio(num, den);
        RandomTape tape = make_tape(seed);
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < samples; ++i) hits += bernoulli_from_real(alpha, tape);
        const double n = static_cast<double>(samples);
        return py::make_tuple(static_cast<double>(hits) / n, static_cast<double>(tape.cursor()) / n);
      },
      py::arg("num"), py::arg("den"), py::arg("samples"), py::arg("seed"), "(frequency, mean bits per draw).");
  m.def(
      "uniform_conditioning",
      [](std::int64_t range, const std::vector<std::int64_t>& divisors, std::uint64_t samples, std::uint64_t seed) {
        QueryOptions opts;
        opts.samples = samples;
        opts.seed = seed;
        std::map<std::int64_t, std::uint64_t> counts;
        for (const auto& d : query_samples(uniform_integer_program(range), divisible_predicate(divisors), opts)) {
          ++counts[d.value];
        }
        return counts;
      },
      py::arg("range") = 180, py::arg("divisors") = std::vector<std::int64_t>{2, 3, 5}, py::arg("samples") = 10000,
      py::arg("seed") = 0);

  // ---- golden-number suite ----
  m.def(
      "verify",
      [](const std::vector<int>& only) {
        AcceptanceConfig config;
        config.only.insert(only.begin(), only.end());
        std::vector<CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = run_acceptance(config);
        }
        return py::make_tuple(all_passed(results), format_report(results));
      },
      py::arg("only") = std::vector<int>{}, "(all passed, report text).");
}
