// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "querysim/bundled.hpp"
#include "querysim/computable.hpp"
#include "querysim/csv.hpp"
#include "querysim/model_io.hpp"
#include "querysim/param_learning.hpp"
#include "querysim/programs.hpp"
#include "querysim/structure.hpp"

namespace querysim {
namespace {

using json = nlohmann::json;

// Tolerances. These are part of the contract and live here, not in the manifest.
constexpr double kTvMax = 0.02;
constexpr double kIterationsRel = 0.05;
constexpr double kDiagnosisAbs = 1e-2;
constexpr double kBetaGridAbs = 1e-6;
constexpr double kDsPrimeAbs = 0.05;
constexpr double kLogIdentityAbs = 1e-12;
constexpr double kSlopeRel = 0.15;
constexpr double kLogCoefficientAbs = 0.15;
constexpr double kStdErrors = 2.0;
constexpr double kFactorizationAbs = 1e-9;
constexpr double kSigmas = 3.0;
constexpr double kPolicyAbs = 1e-3;
constexpr double kIntervalMeanAbs = 0.003;

constexpr double kRuntime1 = 10.0;
constexpr double kRuntime2 = 30.0;
constexpr double kRuntime3 = 60.0;
constexpr double kRuntime4 = 10.0;
constexpr double kRuntime5 = 300.0;
constexpr double kRuntime7 = 120.0;
constexpr double kRuntime8 = 1.0;
constexpr double kRuntime9 = 30.0;

class Checker {
 public:
  explicit Checker(CriterionResult& r) : r_(r) {}

  void metric(const std::string& name, const std::string& value) { r_.metrics.emplace_back(name, value); }
  void metric(const std::string& name, double value) { metric(name, format_fixed(value, 6)); }

  void check(bool ok, const std::string& what) {
    if (!ok) r_.failures.push_back(what);
  }

 private:
  CriterionResult& r_;
};

// Frequency within kSigmas binomial standard errors of p.
bool within_sigmas(double freq, double p, std::uint64_t n, double* z_out = nullptr) {
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  const double z = sigma > 0.0 ? std::abs(freq - p) / sigma : (freq == p ? 0.0 : 1e300);
  if (z_out) *z_out = z;
  return z <= kSigmas;
}

struct Context {
  json manifest;
  DiagnosisParams diagnosis;
  std::optional<BeliefStateModel> belief;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void runtime_check(Checker& c, std::chrono::steady_clock::time_point t0, double limit) {
  const bool ok = seconds_since(t0) < limit;
  c.metric("runtime_limit_s", format_number(limit));
  c.metric("runtime_within_limit", ok ? "yes" : "no");
  c.check(ok, "runtime over " + format_number(limit) + " s");
}

// 1: uniform conditioning on multiples of 30.
void criterion_uniform(const Context& ctx, Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& m = ctx.manifest.at("uniform_conditioning");
  const auto range = m.at("range").get<std::int64_t>();
  const auto divisors = m.at("divisors").get<std::vector<std::int64_t>>();
  const auto support = m.at("support").get<std::vector<std::int64_t>>();

  const auto div = divisible_predicate(divisors);
  RandomTape unused(0);
  const auto exact = enumerate_posterior(uniform_integer_model(range), [&](std::int64_t x) {
    return div(x, unused);
  });
  bool exact_ok = exact.size() == support.size();
  for (std::int64_t x : support) exact_ok = exact_ok && exact.probability(x) == Rational(1, 6);
  c.metric("exact_support_size", format_number(static_cast<std::uint64_t>(exact.size())));
  c.metric("exact_each_one_sixth", exact_ok ? "yes" : "no");
  c.check(exact_ok, "exact posterior is not uniform 1/6 on the expected support");

  QueryOptions opts;
  opts.samples = m.at("samples").get<std::uint64_t>();
  opts.seed = m.at("seed").get<std::uint64_t>();
  const auto draws = query_samples(uniform_integer_program(range), div, opts);
  Empirical<std::int64_t> emp;
  double iterations = 0.0;
  for (const auto& d : draws) {
    emp.add(d.value);
    iterations += static_cast<double>(d.iterations);
  }
  iterations /= static_cast<double>(draws.size());
  const double tv = total_variation(emp, exact);
  const double want = m.at("mean_iterations").get<double>();
  c.metric("tv", tv);
  c.metric("mean_iterations", iterations);
  c.check(tv < kTvMax, "TV to exact posterior >= 0.02");
  c.check(std::abs(iterations - want) <= kIterationsRel * want, "mean iterations not within 5% of 30");
  runtime_check(c, t0, kRuntime1);
}

// 2: diagnosis odds and the rejection sampler.
void criterion_diagnosis(const Context& ctx, Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& m = ctx.manifest.at("diagnosis");
  const auto& params = ctx.diagnosis;
  const auto ev = DiagnosisEvidence::parse(params, m.at("evidence").get<std::string>());
  const auto post = exact_posterior(params, ev);
  const DiseaseMask flu = DiseaseMask{1} << (m.at("influenza").get<int>() - 1);
  const DiseaseMask men = DiseaseMask{1} << (m.at("meningitis").get<int>() - 1);
  const double none = post.probability(0);
  const double flu_odds = post.probability(flu) / none;
  const double men_odds = post.probability(men) / none;
  const double ratio = flu_odds / men_odds;
  const double both = post.probability(flu | men);
  const double explaining = both / (both + post.probability(men));

  auto golden = [&](const char* key, double value) {
    const double want = m.at(key).get<double>();
    c.metric(key, value);
    c.check(std::abs(value - want) <= kDiagnosisAbs,
            std::string(key) + " differs from " + format_number(want) + " by more than 0.01");
  };
  golden("influenza_odds", flu_odds);
  golden("meningitis_odds", men_odds);
  golden("odds_ratio", ratio);
  golden("explaining_away", explaining);

  QueryOptions opts;
  opts.samples = m.at("samples").get<std::uint64_t>();
  opts.seed = m.at("seed").get<std::uint64_t>();
  const auto draws = query_samples(ds_program(params), evidence_predicate(ev), opts);
  Empirical<DiseaseMask> emp;
  for (const auto& d : draws) emp.add(d.value.diseases);
  const double tv = total_variation(emp, post);
  c.metric("tv_disease_vectors", tv);
  c.check(tv < kTvMax, "rejection sampler TV to exact posterior >= 0.02");
  runtime_check(c, t0, kRuntime2);
}

// Normalized first and second moments of p^k (1-p)^(n-k) by composite Simpson.
std::pair<double, double> beta_grid_moments(std::uint64_t k, std::uint64_t n) {
  constexpr int kIntervals = 20000;
  const double h = 1.0 / kIntervals;
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double p = i * h;
    const double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double f = std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
    z += w * f;
    m1 += w * f * p;
    m2 += w * f * p * p;
  }
  const double mean = m1 / z;
  return {mean, m2 / z - mean * mean};
}

// 3: Beta conjugacy and the hierarchical rejection path.
void criterion_conjugacy(const Context& ctx, Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& m = ctx.manifest.at("conjugacy");
  const auto max_n = m.at("max_n").get<std::uint64_t>();
  double worst_mean = 0.0, worst_var = 0.0;
  for (std::uint64_t n = 0; n <= max_n; ++n) {
    for (std::uint64_t k = 0; k <= n; ++k) {
      const auto b = beta_posterior_from_counts(k, n);
      const auto [mean, var] = beta_grid_moments(k, n);
      worst_mean = std::max(worst_mean, std::abs(b.mean() - mean));
      worst_var = std::max(worst_var, std::abs(b.variance() - var));
    }
  }
  c.metric("max_mean_error", format_number(worst_mean));
  c.metric("max_variance_error", format_number(worst_var));
  c.check(worst_mean <= kBetaGridAbs && worst_var <= kBetaGridAbs,
          "closed-form moments differ from grid integration by more than 1e-6");

  const auto n_records = m.at("records").get<std::size_t>();
  const auto& shape = ctx.diagnosis;
  HistoricalRecords records(n_records, DiagnosisEvidence(shape.num_diseases(), shape.num_symptoms()));
  for (auto& r : records) r.observe_disease(0, true);
  const double closed = closed_form_disease_posterior(records, 0).mean();
  QueryOptions opts;
  opts.samples = m.at("accepted").get<std::uint64_t>();
  opts.seed = m.at("seed").get<std::uint64_t>();
  const auto draws = query_samples(
      ds_prime_program(shape, n_records),
      os_prime_predicate(records, DiagnosisEvidence(shape.num_diseases(), shape.num_symptoms())), opts);
  double mean = 0.0;
  for (const auto& d : draws) mean += d.value.params.prevalence[0];
  mean /= static_cast<double>(draws.size());
  c.metric("closed_form_mean_p1", closed);
  c.metric("rejection_mean_p1", mean);
  c.check(std::abs(mean - closed) <= kDsPrimeAbs, "hierarchical rejection mean off by more than 0.05");
  runtime_check(c, t0, kRuntime3);
}

Dataset two_column(const std::vector<int>& x, const std::vector<int>& y) {
  Dataset d;
  d.width = 2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d.rows.push_back(static_cast<VertexMask>(x[i]) | (static_cast<VertexMask>(y[i]) << 1));
  }
  return d;
}

// Integral of p^k (1-p)^(n-k) over [0,1] by expanding the polynomial.
Rational polynomial_integral(std::uint64_t k, std::uint64_t n) {
  Rational total = 0;
  boost::multiprecision::cpp_int binom = 1;
  for (std::uint64_t j = 0; j <= n - k; ++j) {
    if (j > 0) binom = binom * (n - k - j + 1) / j;
    const Rational term = Rational(binom) / Rational(k + j + 1);
    total += (j % 2 == 0) ? term : -term;
  }
  return total;
}

// 4: exact structure scores.
void criterion_score(const Context& ctx, Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& m = ctx.manifest.at("structure_score");

  Dataset single;
  single.width = 1;
  single.rows = {1, 0};
  const auto score = exact_score(count_stats(Dag(1), single));
  const auto want_score = Rational(m.at("single_variable_score")[0].get<int>(),
                                   m.at("single_variable_score")[1].get<int>());
  const auto oracle = polynomial_integral(1, 2);
  c.metric("single_variable_score", score.str());
  c.metric("integral_oracle", oracle.str());
  c.check(score == want_score && oracle == want_score, "single-variable score is not exactly 1/6");

  const Dataset pair = two_column({1, 1, 0, 0}, {1, 1, 0, 0});
  const auto counts = PairCounts::from_data(pair);
  const auto bf = exact_bayes_factor_independent_vs_dependent(counts);
  Dag dep(2);
  dep.add_edge(0, 1);
  const auto via_scores = exact_score(count_stats(Dag(2), pair)) / exact_score(count_stats(dep, pair));
  const auto want_bf = Rational(m.at("bayes_factor")[0].get<int>(), m.at("bayes_factor")[1].get<int>());
  c.metric("bayes_factor", bf.str());
  c.metric("bayes_factor_from_scores", via_scores.str());
  c.check(bf == want_bf && via_scores == want_bf, "Bayes factor is not exactly 3/10");
  c.check(std::abs(bayes_factor_independent_vs_dependent(counts) - 0.3) <= kLogIdentityAbs,
          "floating Bayes factor differs from 0.3");

  RandomTape tape = make_tape(m.at("seed").get<std::uint64_t>());
  const auto datasets = m.at("datasets").get<int>();
  const auto max_rows = m.at("max_rows").get<std::uint64_t>();
  double worst = 0.0;
  for (int i = 0; i < datasets; ++i) {
    Dataset d;
    d.width = 2;
    const auto rows = tape.uniform_int(max_rows + 1);
    for (std::uint64_t r = 0; r < rows; ++r) d.rows.push_back(static_cast<VertexMask>(tape.bits(2)));
    const double lhs = log_bayes_factor_independent_vs_dependent(PairCounts::from_data(d));
    const double rhs = log_score(Dag(2), d) - log_score(dep, d);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  c.metric("log_identity_max_error", format_number(worst));
  c.check(worst <= kLogIdentityAbs, "log Bayes factor differs from the score difference");
  runtime_check(c, t0, kRuntime4);
}

// 5: weight-of-evidence rates.
void criterion_evidence(const Context& ctx, Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& m = ctx.manifest.at("weight_of_evidence");
  const RandomTape master = make_tape(m.at("seed").get<std::uint64_t>());

  EvidenceExperiment dep;
  dep.d = m.at("d").get<double>();
  dep.trials = m.at("dependent_trials").get<std::uint64_t>();
  dep.n_max = m.at("dependent_n_max").get<std::uint64_t>();
  const auto dep_curve = weight_of_evidence_experiment(dep, split_tape(master, 0));
  std::vector<double> xs, ys;
  const auto dep_from = m.at("dependent_fit_from").get<std::uint64_t>();
  for (const auto& p : dep_curve) {
    if (p.n >= dep_from) {
      xs.push_back(static_cast<double>(p.n));
      ys.push_back(p.mean_log_ratio);
    }
  }
  const double slope = fit_slope(xs, ys);
  const double want_slope = m.at("slope").get<double>();
  c.metric("dependent_slope", slope);
  c.metric("rate_constant", -dependence_rate(dep.d));
  c.check(std::abs(slope - want_slope) <= kSlopeRel * std::abs(want_slope),
          "dependent slope not within 15% of -0.131");

  EvidenceExperiment ind;
  ind.independent = true;
  ind.trials = m.at("independent_trials").get<std::uint64_t>();
  ind.n_max = m.at("independent_n_max").get<std::uint64_t>();
  const auto ind_curve = weight_of_evidence_experiment(ind, split_tape(master, 1));
  xs.clear();
  ys.clear();
  const auto ind_from = m.at("independent_fit_from").get<std::uint64_t>();
  for (const auto& p : ind_curve) {
    if (p.n >= ind_from) {
      xs.push_back(0.5 * std::log(static_cast<double>(p.n)));
      ys.push_back(p.mean_log_ratio);
    }
  }
  const double coef = fit_slope(xs, ys);
  const double want_coef = m.at("log_coefficient").get<double>();
  c.metric("independent_log_coefficient", coef);
  c.check(std::abs(coef - want_coef) <= kLogCoefficientAbs, "independent coefficient not within 1.0 +- 0.15");

  // Nonnegativity holds in expectation over the true hypothesis's prior, not
  // at a fixed table: with fair independent bits the mean is negative for
  // n in 2..9. So the sign check draws each trial's table from that prior.
  EvidenceExperiment dep_prior = dep;
  dep_prior.prior_drawn = true;
  EvidenceExperiment ind_prior = ind;
  ind_prior.prior_drawn = true;
  bool dep_sign = true;
  for (const auto& p : weight_of_evidence_experiment(dep_prior, split_tape(master, 2))) {
    // The truth is dependence, so the evidence for it is -mean_log_ratio.
    dep_sign = dep_sign && -p.mean_log_ratio >= -kStdErrors * p.std_error;
  }
  bool ind_sign = true;
  for (const auto& p : weight_of_evidence_experiment(ind_prior, split_tape(master, 3))) {
    ind_sign = ind_sign && p.mean_log_ratio >= -kStdErrors * p.std_error;
  }
  c.metric("true_hypothesis_nonnegative", dep_sign && ind_sign ? "yes" : "no");
  c.check(dep_sign && ind_sign, "mean evidence for the true hypothesis below -2 standard errors");
  runtime_check(c, t0, kRuntime5);
}

// 6: d-separation on the diagnosis graph and factorization on random models.
void criterion_dsep(const Context& ctx, Checker& c) {
  const auto& m = ctx.manifest.at("d_separation");
  const std::size_t nd = ctx.diagnosis.num_diseases();
  const std::size_t ns = ctx.diagnosis.num_symptoms();
  const Dag g = diagnosis_graph(nd, ns);

  bool diseases_ok = true;
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = i + 1; j < nd; ++j) diseases_ok = diseases_ok && d_separated(g, i, j, VertexMask{0});
  }
  const VertexMask all_diseases = (VertexMask{1} << nd) - 1;
  bool symptoms_ok = true;
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = i + 1; j < ns; ++j) {
      symptoms_ok = symptoms_ok && d_separated(g, nd + i, nd + j, all_diseases);
    }
  }
  Dag collider(3);
  collider.add_edge(0, 2);
  collider.add_edge(1, 2);
  const bool collider_ok = d_separated(collider, 0, 1, VertexMask{0}) &&
                           !d_separated(collider, 0, 1, VertexMask{1} << 2);
  c.metric("diseases_independent", diseases_ok ? "yes" : "no");
  c.metric("symptoms_independent_given_diseases", symptoms_ok ? "yes" : "no");
  c.metric("collider", collider_ok ? "yes" : "no");
  c.check(diseases_ok, "some disease pair is not d-separated given nothing");
  c.check(symptoms_ok, "some symptom pair is not d-separated given the diseases");
  c.check(collider_ok, "collider behaves incorrectly");

  const RandomTape master = make_tape(m.at("seed").get<std::uint64_t>());
  const auto models = m.at("random_models").get<int>();
  const auto max_d = m.at("max_vertices").get<std::size_t>();
  double worst = 0.0;
  std::uint64_t triples = 0;
  for (int i = 0; i < models; ++i) {
    RandomTape tape = split_tape(master, static_cast<std::uint64_t>(i));
    const std::size_t d = 2 + static_cast<std::size_t>(i) % (max_d - 1);
    const Dag dag = sample_uniform_dag(d, tape);
    const auto joint = joint_pmf(dag, Cpt::uniform_random(dag, tape));
    std::vector<double> pmf(std::size_t{1} << d, 0.0);
    for (const auto& [row, p] : joint.atoms()) pmf[row] += p;
    for (std::size_t x = 0; x < d; ++x) {
      for (std::size_t y = x + 1; y < d; ++y) {
        const VertexMask rest = ((VertexMask{1} << d) - 1) & ~(VertexMask{1} << x) & ~(VertexMask{1} << y);
        // Every evidence set E within the remaining vertices.
        for (VertexMask e = rest;; e = (e - 1) & rest) {
          if (d_separated(dag, x, y, e)) {
            ++triples;
            // Every assignment of E: enumerate rows and group by (row & e).
            for (VertexMask val = e;; val = (val - 1) & e) {
              double pe = 0.0, pxy = 0.0, px = 0.0, py = 0.0;
              for (VertexMask row = 0; row < pmf.size(); ++row) {
                if ((row & e) != val) continue;
                pe += pmf[row];
                const bool bx = (row >> x) & 1u, by = (row >> y) & 1u;
                if (bx && by) pxy += pmf[row];
                if (bx) px += pmf[row];
                if (by) py += pmf[row];
              }
              if (pe > 0.0) worst = std::max(worst, std::abs(pxy / pe - (px / pe) * (py / pe)));
              if (val == 0) break;
            }
          }
          if (e == 0) break;
        }
      }
    }
  }
  c.metric("separated_triples_checked", format_number(triples));
  c.metric("max_factorization_error", format_number(worst));
  c.check(worst <= kFactorizationAbs, "enumerated joint does not factorize on a d-separated triple");
}

// 7: choice-rule frequencies.
void criterion_choice(const Context& ctx, Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& m = ctx.manifest.at("choice_rules");
  const auto probs = m.at("success_probabilities").get<std::vector<double>>();
  const auto ks = m.at("k").get<std::vector<std::uint64_t>>();
  const auto trials = m.at("trials").get<std::uint64_t>();
  const auto seed = m.at("seed").get<std::uint64_t>();
  double worst_z = 0.0;
  int failures = 0, cases = 0;
  std::uint64_t idx = 0;
  for (const ChoiceRule rule : {ChoiceRule::kMultiplicative, ChoiceRule::kAdditive}) {
    for (double px : probs) {
      for (double py : probs) {
        for (std::uint64_t k : ks) {
          QueryOptions opts;
          opts.samples = trials;
          opts.seed = split_seed(seed, idx++);
          const double freq = choice_frequency(rule, ActionSimulator::bernoulli(px),
                                               ActionSimulator::bernoulli(py), k, opts);
          const double want = rule == ChoiceRule::kMultiplicative
                                  ? multiplicative_choice_probability(px, py, k)
                                  : additive_choice_probability(px, py, k);
          double z = 0.0;
          if (!within_sigmas(freq, want, trials, &z)) ++failures;
          worst_z = std::max(worst_z, z);
          ++cases;
        }
      }
    }
  }
  c.metric("cases", format_number(static_cast<std::uint64_t>(cases)));
  c.metric("cases_outside_3_sigma", format_number(static_cast<std::uint64_t>(failures)));
  c.metric("max_z", worst_z);
  c.check(failures == 0, "some choice frequency is outside 3 sigma of its closed form");
  runtime_check(c, t0, kRuntime7);
}

// 8: the sequential policy example.
void criterion_policy(const Context& ctx, Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& m = ctx.manifest.at("sequential_policy");
  const BeliefStateModel& model = *ctx.belief;
  auto state = [&](const char* name) {
    auto s = model.index_of(name);
    if (!s) throw InvalidModel(std::string("belief model has no state '") + name + "'");
    return *s;
  };
  auto action = [&](std::size_t s, const std::string& name) {
    auto a = model.action_index(s, name);
    if (!a) throw InvalidModel("state '" + model.state(s).name + "' has no action '" + name + "'");
    return *a;
  };
  const std::size_t start = state("start"), pos = state("positive"), neg = state("negative");
  const auto sol = solve_policy(model, Amplification::power(1));

  auto golden = [&](const std::string& key, double value) {
    const double want = m.at(key).get<double>();
    c.metric(key, value);
    c.check(std::abs(value - want) <= kPolicyAbs, key + " differs from " + format_number(want) + " by more than 1e-3");
  };
  golden("wait_at_negative", sol.policy.probs[neg][action(neg, "WAIT")]);
  golden("wait_at_positive", sol.policy.probs[pos][action(pos, "WAIT")]);
  golden("negative_success", sol.success[neg]);
  golden("positive_success", sol.success[pos]);
  golden("test_success", sol.action_success[start][action(start, "TEST")]);
  for (const auto& [name, want] : m.at("root").items()) {
    const double p = sol.policy.probs[start][action(start, name)];
    c.metric("root_" + name, p);
    c.check(std::abs(p - want.get<double>()) <= kPolicyAbs, "root probability of " + name + " is off");
  }

  const auto best = solve_policy(model, Amplification::limit());
  for (const auto& [name, act_name] : m.at("argmax").items()) {
    const std::size_t s = state(name.c_str());
    const double p = best.policy.probs[s][action(s, act_name.get<std::string>())];
    c.metric("argmax_" + name, act_name.get<std::string>() + " " + format_fixed(p, 6));
    c.check(p == 1.0, "argmax policy at " + name + " is not " + act_name.get<std::string>());
  }
  runtime_check(c, t0, kRuntime8);
}

// 9: sampling from computable reals and pmfs; interval conditioning.
void criterion_computable(const Context& ctx, Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& m = ctx.manifest.at("computable");
  const RandomTape master = make_tape(m.at("seed").get<std::uint64_t>());
  const auto n = m.at("samples").get<std::uint64_t>();

  const auto num = m.at("bernoulli")[0].get<std::uint64_t>();
  const auto den = m.at("bernoulli")[1].get<std::uint64_t>();
  const auto third = ComputableReal::ratio(num, den);
  RandomTape tape = split_tape(master, 0);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) hits += bernoulli_from_real(third, tape);
  const double freq = static_cast<double>(hits) / static_cast<double>(n);
  const double bits = static_cast<double>(tape.cursor()) / static_cast<double>(n);
  c.metric("bernoulli_frequency", freq);
  c.metric("mean_bits", bits);
  c.check(within_sigmas(freq, static_cast<double>(num) / static_cast<double>(den), n),
          "Bernoulli frequency outside 3 sigma");
  c.check(bits < m.at("max_mean_bits").get<double>(), "mean bits consumed is not below 6");

  const auto two = m.at("two_atoms").get<std::vector<double>>();
  const auto pmf = ComputablePmf<int>::finite({{0, two[0]}, {1, two[1]}});
  tape = split_tape(master, 1);
  hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) hits += sample_countable(pmf, tape) == 0;
  const double freq_a = static_cast<double>(hits) / static_cast<double>(n);
  c.metric("two_atom_frequency", freq_a);
  c.check(within_sigmas(freq_a, two[0], n), "two-atom frequency outside 3 sigma");

  tape = split_tape(master, 2);
  const auto geo = geometric_half_pmf();
  std::vector<std::uint64_t> counts(6, 0);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t v = sample_countable(geo, tape);
    sum += static_cast<double>(v);
    if (v < counts.size()) ++counts[v];
  }
  const double mean = sum / static_cast<double>(n);
  bool atoms_ok = true;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    atoms_ok = atoms_ok && within_sigmas(static_cast<double>(counts[i]) / static_cast<double>(n),
                                         std::ldexp(1.0, -static_cast<int>(i + 1)), n);
  }
  const double mean_sigma = std::sqrt(2.0 / static_cast<double>(n));
  c.metric("geometric_mean", mean);
  c.check(atoms_ok, "geometric atom frequency outside 3 sigma");
  c.check(std::abs(mean - m.at("geometric_mean").get<double>()) <= kSigmas * mean_sigma,
          "geometric mean outside 3 sigma");

  const auto prior = make_program<std::pair<double, double>>([](RandomTape& t) {
    const double x = t.uniform01();
    return std::pair<double, double>{x, x};
  });
  QueryOptions opts;
  opts.samples = m.at("interval_samples").get<std::uint64_t>();
  opts.seed = split_seed(master.seed(), 3);
  const double x0 = m.at("interval_x").get<double>();
  const double eps = m.at("interval_epsilon").get<double>();
  const auto ys = interval_condition(prior, x0, eps, opts);
  double ysum = 0.0, ymin = 1.0, ymax = 0.0;
  for (double y : ys) {
    ysum += y;
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double ymean = ysum / static_cast<double>(ys.size());
  c.metric("interval_mean", ymean);
  c.metric("interval_min", ymin);
  c.metric("interval_max", ymax);
  c.check(std::abs(ymean - m.at("interval_mean").get<double>()) <= kIntervalMeanAbs,
          "interval-conditioned mean not within 0.003 of 0.5");
  c.check(ymin > x0 - eps && ymax < x0 + eps, "interval-conditioned support leaves the interval");
  runtime_check(c, t0, kRuntime9);
}

struct Criterion {
  int id;
  const char* title;
  void (*run)(const Context&, Checker&);
};

constexpr Criterion kCriteria[] = {
    {1, "uniform conditioning", criterion_uniform},
    {2, "diagnosis golden numbers", criterion_diagnosis},
    {3, "beta conjugacy", criterion_conjugacy},
    {4, "structure score", criterion_score},
    {5, "weight of evidence", criterion_evidence},
    {6, "d-separation", criterion_dsep},
    {7, "choice rules", criterion_choice},
    {8, "sequential policy", criterion_policy},
    {9, "computable sampling", criterion_computable},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config) {
  Context ctx;
  ctx.manifest = json::parse(config.manifest ? std::string_view(*config.manifest) : bundled::golden_manifest());
  ctx.diagnosis = config.diagnosis_model ? *config.diagnosis_model : table1_params();
  if (config.belief_model) {
    ctx.belief = *config.belief_model;
  } else {
    ctx.belief = parse_belief_model(bundled::fig4_model());
  }

  std::vector<CriterionResult> out;
  for (const auto& crit : kCriteria) {
    if (!config.only.empty() && !config.only.contains(crit.id)) continue;
    CriterionResult r;
    r.id = crit.id;
    r.title = crit.title;
    Checker checker(r);
    try {
      crit.run(ctx, checker);
    } catch (const std::exception& e) {
      r.failures.push_back(std::string("error: ") + e.what());
    }
    r.passed = r.failures.empty();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_report(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    out << "criterion " << r.id << ' ' << (r.passed ? "PASS" : "FAIL") << ' ' << r.title << '\n';
    for (const auto& [name, value] : r.metrics) out << "  " << name << " = " << value << '\n';
    for (const auto& f : r.failures) out << "  failed: " << f << '\n';
  }
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed;
  out << passed << '/' << results.size() << " criteria passed\n";
  return out.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

}  // namespace querysim
