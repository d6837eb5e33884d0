// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

// querysim: command-line front end. Every subcommand writes CSV (header row,
// LF endings) to stdout or --out, and is deterministic given its inputs and --seed.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "querysim/acceptance.hpp"
#include "querysim/bundled.hpp"
#include "querysim/computable.hpp"
#include "querysim/csv.hpp"
#include "querysim/decision.hpp"
#include "querysim/diagnosis.hpp"
#include "querysim/model_io.hpp"
#include "querysim/param_learning.hpp"
#include "querysim/programs.hpp"
#include "querysim/structure.hpp"

namespace qs = querysim;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::uint64_t samples = 10000;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--samples", c.samples, "Number of accepted samples")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
}

// Writes `text` to the --out file or stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + c.out);
  f << text;
}

qs::DiagnosisParams diagnosis_model(const std::string& path) {
  return path.empty() ? qs::parse_diagnosis_model(qs::bundled::table1_model()) : qs::load_diagnosis_model(path);
}

qs::BeliefStateModel belief_model(const std::string& path) {
  return path.empty() ? qs::parse_belief_model(qs::bundled::fig4_model()) : qs::load_belief_model(path);
}

// "none", or a comma separated list of disease indices (1-based) or names.
qs::DiseaseMask parse_disease_set(const qs::DiagnosisParams& params, std::string text) {
  while (!text.empty() && text.front() == ' ') text.erase(text.begin());
  while (!text.empty() && text.back() == ' ') text.pop_back();
  if (text == "none") return 0;
  qs::DiseaseMask mask = 0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::optional<std::size_t> idx = params.disease_index(item);
    if (!idx && !item.empty() && item.find_first_not_of("0123456789") == std::string::npos) {
      const auto v = std::stoul(item);
      if (v >= 1 && v <= params.num_diseases()) idx = v - 1;
    }
    if (!idx) throw qs::DomainError("unknown disease '" + item + "'");
    mask |= qs::DiseaseMask{1} << *idx;
  }
  return mask;
}

struct OddsSpec {
  std::string label;
  qs::DiseaseMask a = 0, b = 0;
};

// "A vs B": posterior odds of exactly the diseases in A against exactly those in B.
OddsSpec parse_odds(const qs::DiagnosisParams& params, const std::string& text) {
  const auto pos = text.find(" vs ");
  if (pos == std::string::npos) throw qs::DomainError("odds must look like 'A vs B': " + text);
  OddsSpec s;
  s.label = text;
  s.a = parse_disease_set(params, text.substr(0, pos));
  s.b = parse_disease_set(params, text.substr(pos + 4));
  return s;
}

std::string ratio_text(double num, double den) {
  return den > 0.0 ? qs::format_number(num / den) : std::string("inf");
}

// ---- diagnose ----

struct DiagnoseArgs {
  Common common;
  std::string model, evidence, mode = "exact";
  std::vector<std::string> odds;
};

int run_diagnose(const DiagnoseArgs& a) {
  const auto params = diagnosis_model(a.model);
  const auto ev = qs::DiagnosisEvidence::parse(params, a.evidence);
  std::vector<OddsSpec> odds;
  for (const auto& o : a.odds) odds.push_back(parse_odds(params, o));

  std::ostringstream out;
  qs::write_csv_row(out, {"kind", "name", "value"});
  if (a.mode == "exact") {
    const auto post = qs::exact_posterior(params, ev);
    const auto marg = qs::posterior_marginals(params, ev);
    for (std::size_t n = 0; n < marg.size(); ++n) {
      qs::write_csv_row(out, {"marginal", params.disease_names[n], qs::format_number(marg[n])});
    }
    for (const auto& o : odds) {
      qs::write_csv_row(out, {"odds", o.label, ratio_text(post.probability(o.a), post.probability(o.b))});
    }
  } else {
    qs::QueryOptions opts;
    opts.seed = a.common.seed;
    opts.samples = a.common.samples;
    const auto draws = qs::query_samples(qs::ds_program(params), qs::evidence_predicate(ev), opts);
    std::vector<std::uint64_t> hits(params.num_diseases(), 0);
    std::map<qs::DiseaseMask, std::uint64_t> configs;
    double iterations = 0.0;
    for (const auto& d : draws) {
      for (std::size_t n = 0; n < hits.size(); ++n) hits[n] += d.value.disease(n);
      ++configs[d.value.diseases];
      iterations += static_cast<double>(d.iterations);
    }
    const double m = static_cast<double>(draws.size());
    for (std::size_t n = 0; n < hits.size(); ++n) {
      qs::write_csv_row(out, {"marginal", params.disease_names[n],
                              qs::format_number(static_cast<double>(hits[n]) / m)});
    }
    for (const auto& o : odds) {
      qs::write_csv_row(out, {"odds", o.label,
                              ratio_text(static_cast<double>(configs[o.a]), static_cast<double>(configs[o.b]))});
    }
    qs::write_csv_row(out, {"mean_iterations", "", qs::format_number(iterations / m)});
  }
  emit(a.common, out.str());
  return 0;
}

// ---- learn ----

struct LearnArgs {
  Common common;
  std::string model, records, current, mode = "exact";
};

// One evidence string per line; "-" is a record observing nothing; '#' starts a comment.
qs::HistoricalRecords load_records(const qs::DiagnosisParams& params, const std::string& path) {
  qs::HistoricalRecords out;
  std::istringstream in(qs::read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.find_first_not_of(" \t\r-") == std::string::npos) line.clear();
    out.push_back(qs::DiagnosisEvidence::parse(params, line));
  }
  return out;
}

int run_learn(const LearnArgs& a) {
  const auto shape = diagnosis_model(a.model);
  const auto records = load_records(shape, a.records);
  std::ostringstream out;
  if (a.mode == "exact") {
    qs::write_posterior_csv(out, qs::posterior_summaries(shape, records));
  } else {
    qs::QueryOptions opts;
    opts.seed = a.common.seed;
    opts.samples = a.common.samples;
    const auto current = qs::DiagnosisEvidence::parse(shape, a.current);
    const auto draws = qs::query_samples(qs::ds_prime_program(shape, records.size()),
                                         qs::os_prime_predicate(records, current), opts);
    const double m = static_cast<double>(draws.size());
    qs::write_csv_row(out, {"parameter", "samples", "post_mean", "post_var"});
    for (std::size_t n = 0; n < shape.num_diseases(); ++n) {
      double s = 0.0, s2 = 0.0;
      for (const auto& d : draws) {
        const double p = d.value.params.prevalence[n];
        s += p;
        s2 += p * p;
      }
      const double mean = s / m;
      qs::write_csv_row(out, {"p" + std::to_string(n + 1), qs::format_number(static_cast<std::uint64_t>(draws.size())),
                              qs::format_number(mean), qs::format_number(std::max(0.0, s2 / m - mean * mean))});
    }
  }
  emit(a.common, out.str());
  return 0;
}

// ---- structure ----

struct StructureArgs {
  Common common;
  std::string mode = "score", data;
  std::optional<std::size_t> vertices;
  double d = 0.5;
  std::uint64_t trials = 100, n_max = 2000;
  bool independent = false, prior_drawn = false;
};

std::string edge_list(const qs::Dag& g) {
  std::string s;
  for (const auto& [p, c] : g.edges()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(p) + "->" + std::to_string(c);
  }
  return s.empty() ? "none" : s;
}

int run_structure(const StructureArgs& a) {
  std::ostringstream out;
  if (a.mode == "score") {
    if (a.data.empty()) throw qs::DomainError("score mode needs a data file");
    const auto data = qs::load_dataset(a.data, a.vertices);
    qs::write_csv_row(out, {"graph", "edges", "log_score"});
    const auto& graphs = qs::enumerate_dags(data.width);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      qs::write_csv_row(out, {std::to_string(i), edge_list(graphs[i]),
                              qs::format_number(qs::log_score(graphs[i], data))});
    }
  } else {
    qs::EvidenceExperiment e;
    e.d = a.d;
    e.trials = a.trials;
    e.n_max = a.n_max;
    e.independent = a.independent;
    e.prior_drawn = a.prior_drawn;
    const auto curve = qs::weight_of_evidence_experiment(e, qs::make_tape(a.common.seed));
    qs::write_csv_row(out, {"n", "mean_log_bf", "std_error"});
    for (const auto& p : curve) {
      qs::write_csv_row(out, {qs::format_number(p.n), qs::format_number(p.mean_log_ratio),
                              qs::format_number(p.std_error)});
    }
  }
  emit(a.common, out.str());
  return 0;
}

// ---- decide ----

struct DecideArgs {
  Common common;
  std::string model, mode = "exact";
  std::uint64_t k = 1;
  bool argmax = false;
};

int run_decide(const DecideArgs& a) {
  const auto model = belief_model(a.model);
  qs::StochasticPolicy pi;
  if (a.mode == "exact") {
    pi = qs::solve_policy(model, a.argmax ? qs::Amplification::limit() : qs::Amplification::power(a.k))
             .policy;
  } else {
    if (a.argmax) throw qs::DomainError("sample mode needs a finite --k");
    // Backward order: each state's action frequencies use the already sampled
    // policy at the states after it.
    pi = qs::StochasticPolicy::uniform(model);
    for (const std::size_t b : model.reverse_topological_order()) {
      if (model.state(b).terminal != qs::Terminal::kNone) continue;
      qs::QueryOptions opts;
      opts.samples = a.common.samples;
      opts.seed = qs::split_seed(a.common.seed, b);
      pi.probs[b] = qs::act_sample_frequencies(model, b, pi, a.k, opts);
    }
  }
  std::ostringstream out;
  qs::write_csv_row(out, {"state", "action", "probability", "action_success", "state_success"});
  for (std::size_t b = 0; b < model.size(); ++b) {
    const auto& s = model.state(b);
    if (s.terminal != qs::Terminal::kNone) continue;
    const double v = qs::success_prob(model, b, pi);
    for (std::size_t z = 0; z < s.actions.size(); ++z) {
      qs::write_csv_row(out, {s.name, s.actions[z].name, qs::format_number(pi.probs[b][z]),
                              qs::format_number(qs::action_success_prob(model, b, z, pi)),
                              qs::format_number(v)});
    }
  }
  emit(a.common, out.str());
  return 0;
}

// ---- choice ----

struct ChoiceArgs {
  Common common;
  double px = 0.6, py = 0.3;
  std::uint64_t k = 1;
  std::string rule = "multiplicative";
};

int run_choice(const ChoiceArgs& a) {
  const bool mult = a.rule == "multiplicative";
  qs::QueryOptions opts;
  opts.seed = a.common.seed;
  opts.samples = a.common.samples;
  const double freq = qs::choice_frequency(mult ? qs::ChoiceRule::kMultiplicative : qs::ChoiceRule::kAdditive,
                                           qs::ActionSimulator::bernoulli(a.px),
                                           qs::ActionSimulator::bernoulli(a.py), a.k, opts);
  const double want = mult ? qs::multiplicative_choice_probability(a.px, a.py, a.k)
                           : qs::additive_choice_probability(a.px, a.py, a.k);
  std::ostringstream out;
  qs::write_csv_row(out, {"rule", "px", "py", "k", "frequency", "closed_form"});
  qs::write_csv_row(out, {a.rule, qs::format_number(a.px), qs::format_number(a.py), qs::format_number(a.k),
                          qs::format_number(freq), qs::format_number(want)});
  emit(a.common, out.str());
  return 0;
}

// ---- n180 ----

struct UniformArgs {
  Common common;
  std::int64_t range = 180;
  std::vector<std::int64_t> divisors{2, 3, 5};
};

int run_uniform(const UniformArgs& a) {
  qs::QueryOptions opts;
  opts.seed = a.common.seed;
  opts.samples = a.common.samples;
  const auto div = qs::divisible_predicate(a.divisors);
  const auto draws = qs::query_samples(qs::uniform_integer_program(a.range), div, opts);
  qs::RandomTape unused(0);
  const auto exact = qs::enumerate_posterior(qs::uniform_integer_model(a.range),
                                             [&](std::int64_t x) { return div(x, unused); });
  std::map<std::int64_t, std::uint64_t> counts;
  for (const auto& d : draws) ++counts[d.value];
  std::ostringstream out;
  qs::write_csv_row(out, {"value", "frequency", "exact"});
  const double m = static_cast<double>(draws.size());
  for (const auto& [x, w] : exact.atoms()) {
    qs::write_csv_row(out, {std::to_string(x), qs::format_number(static_cast<double>(counts[x]) / m),
                            qs::format_number(qs::to_double(w))});
  }
  emit(a.common, out.str());
  return 0;
}

// ---- computable ----

struct ComputableArgs {
  Common common;
  std::string mode = "bernoulli";
  std::uint64_t num = 1, den = 3;
  double x = 0.5, epsilon = 0.1;
};

int run_computable(const ComputableArgs& a) {
  std::ostringstream out;
  if (a.mode == "bernoulli") {
    const auto alpha = qs::ComputableReal::ratio(a.num, a.den);
    qs::RandomTape tape = qs::make_tape(a.common.seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < a.common.samples; ++i) hits += qs::bernoulli_from_real(alpha, tape);
    const double m = static_cast<double>(a.common.samples);
    qs::write_csv_row(out, {"alpha", "frequency", "mean_bits"});
    qs::write_csv_row(out, {qs::format_number(static_cast<double>(a.num) / static_cast<double>(a.den)),
                            qs::format_number(static_cast<double>(hits) / m),
                            qs::format_number(static_cast<double>(tape.cursor()) / m)});
  } else {
    // X uniform on [0,1], Y = X; condition on |X - x| < epsilon.
    const auto prior = qs::make_program<std::pair<double, double>>([](qs::RandomTape& t) {
      const double u = t.uniform01();
      return std::make_pair(u, u);
    });
    qs::QueryOptions opts;
    opts.seed = a.common.seed;
    opts.samples = a.common.samples;
    qs::write_csv_row(out, {"sample", "value"});
    std::uint64_t i = 0;
    for (const double y : qs::interval_condition(prior, a.x, a.epsilon, opts)) {
      qs::write_csv_row(out, {qs::format_number(i++), qs::format_number(y)});
    }
  }
  emit(a.common, out.str());
  return 0;
}

// ---- verify ----

struct VerifyArgs {
  std::string model, belief, manifest, out;
  std::vector<int> only;
};

int run_verify(const VerifyArgs& a) {
  qs::AcceptanceConfig config;
  if (!a.model.empty()) config.diagnosis_model = qs::load_diagnosis_model(a.model);
  if (!a.belief.empty()) config.belief_model = qs::load_belief_model(a.belief);
  if (!a.manifest.empty()) config.manifest = qs::read_text_file(a.manifest);
  config.only.insert(a.only.begin(), a.only.end());
  const auto results = qs::run_acceptance(config);
  Common c;
  c.out = a.out;
  emit(c, qs::format_report(results));
  return qs::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"querysim: conditional simulation experiments"};
  app.require_subcommand(1);
  int rc = 0;

  DiagnoseArgs diag;
  auto* cmd = app.add_subcommand("diagnose", "Posterior over diseases given symptoms");
  add_common(cmd, diag.common);
  cmd->add_option("--model", diag.model, "Diagnosis model file (default: bundled table)");
  cmd->add_option("--evidence", diag.evidence, "Observations, e.g. \"S1=1 S7=1\"");
  cmd->add_option("--odds", diag.odds, "Posterior odds \"A vs B\" of exact disease sets");
  cmd->add_option("--mode", diag.mode)->check(CLI::IsMember({"exact", "sample"}));
  cmd->callback([&] { rc = run_diagnose(diag); });

  LearnArgs learn;
  cmd = app.add_subcommand("learn", "Posterior over disease rates from historical records");
  add_common(cmd, learn.common);
  cmd->add_option("--model", learn.model, "Model whose shape is used (default: bundled table)");
  cmd->add_option("records", learn.records, "Records file, one evidence string per line")->required();
  cmd->add_option("--current", learn.current, "Observations on the current patient (sample mode)");
  cmd->add_option("--mode", learn.mode)->check(CLI::IsMember({"exact", "sample"}));
  cmd->callback([&] { rc = run_learn(learn); });

  StructureArgs st;
  cmd = app.add_subcommand("structure", "Graph scores or weight-of-evidence curves");
  add_common(cmd, st.common);
  cmd->add_option("--mode", st.mode)->check(CLI::IsMember({"score", "evidence-curve"}));
  cmd->add_option("data", st.data, "Data file (score mode)");
  cmd->add_option("--vertices,-D", st.vertices, "Number of variables");
  cmd->add_option("--d", st.d, "Dependence strength of the generating table");
  cmd->add_option("--trials", st.trials);
  cmd->add_option("--n-max", st.n_max);
  cmd->add_flag("--independent", st.independent, "Generate independent data");
  cmd->add_flag("--prior-drawn", st.prior_drawn, "Draw each trial's table from the prior");
  cmd->callback([&] { rc = run_structure(st); });

  DecideArgs dec;
  cmd = app.add_subcommand("decide", "Policy over a belief-state model");
  add_common(cmd, dec.common);
  cmd->add_option("--model", dec.model, "Belief model file (default: bundled treatment model)");
  cmd->add_option("--k", dec.k, "Exponent of the choice rule")->check(CLI::PositiveNumber);
  cmd->add_flag("--argmax", dec.argmax, "Use the k -> infinity limit");
  cmd->add_option("--mode", dec.mode)->check(CLI::IsMember({"exact", "sample"}));
  cmd->callback([&] { rc = run_decide(dec); });

  ChoiceArgs ch;
  cmd = app.add_subcommand("choice", "Choice frequency between two simulated treatments");
  add_common(cmd, ch.common);
  cmd->add_option("--px", ch.px)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--py", ch.py)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--k", ch.k)->check(CLI::PositiveNumber);
  cmd->add_option("--rule", ch.rule)->check(CLI::IsMember({"multiplicative", "additive"}));
  cmd->callback([&] { rc = run_choice(ch); });

  UniformArgs un;
  cmd = app.add_subcommand("n180", "Uniform integer conditioned on divisibility");
  add_common(cmd, un.common);
  cmd->add_option("--range", un.range)->check(CLI::PositiveNumber);
  cmd->add_option("--divisors", un.divisors);
  cmd->callback([&] { rc = run_uniform(un); });

  ComputableArgs cp;
  cmd = app.add_subcommand("computable", "Bernoulli from a computable real, or interval conditioning");
  add_common(cmd, cp.common);
  cmd->add_option("--mode", cp.mode)->check(CLI::IsMember({"bernoulli", "interval"}));
  cmd->add_option("--num", cp.num);
  cmd->add_option("--den", cp.den)->check(CLI::PositiveNumber);
  cmd->add_option("--x", cp.x);
  cmd->add_option("--epsilon", cp.epsilon);
  cmd->callback([&] { rc = run_computable(cp); });

  VerifyArgs ver;
  cmd = app.add_subcommand("verify", "Run the golden-number suite");
  cmd->add_option("--model", ver.model, "Diagnosis model file replacing the bundled one");
  cmd->add_option("--belief", ver.belief, "Belief model file replacing the bundled one");
  cmd->add_option("--manifest", ver.manifest, "Golden-values JSON replacing the bundled one");
  cmd->add_option("--only", ver.only, "Criteria to run")->delimiter(',');
  cmd->add_option("--out", ver.out, "Report file (default: stdout)");
  cmd->callback([&] { rc = run_verify(ver); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "querysim: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
