// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/diagnosis.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "querysim/bundled.hpp"
#include "querysim/model_io.hpp"
#include "querysim/structure.hpp"

namespace querysim {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<std::size_t> find_name(const std::vector<std::string>& names, std::string_view name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (iequals(names[i], name)) return i;
  }
  return std::nullopt;
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void require_enumerable(const DiagnosisParams& params) {
  if (params.num_diseases() > kMaxEnumeratedDiseases) {
    throw DimensionTooLarge("exact enumeration supports at most " +
                            std::to_string(kMaxEnumeratedDiseases) + " diseases");
  }
}

double prior_of(const DiagnosisParams& params, DiseaseMask d) {
  double p = 1.0;
  for (std::size_t n = 0; n < params.num_diseases(); ++n) {
    p *= ((d >> n) & 1u) ? params.prevalence[n] : 1.0 - params.prevalence[n];
  }
  return p;
}

bool consistent_diseases(const DiagnosisEvidence& ev, DiseaseMask d) {
  const auto& obs = ev.diseases();
  for (std::size_t n = 0; n < obs.size(); ++n) {
    if (obs[n] && *obs[n] != static_cast<bool>((d >> n) & 1u)) return false;
  }
  return true;
}

// Prior weight of d times the likelihood of the observed symptoms.
double evidence_weight(const DiagnosisParams& params, const DiagnosisEvidence& ev, DiseaseMask d) {
  if (!consistent_diseases(ev, d)) return 0.0;
  double w = prior_of(params, d);
  const auto& obs = ev.symptoms();
  for (std::size_t m = 0; m < obs.size() && w > 0.0; ++m) {
    if (!obs[m]) continue;
    const double on = symptom_prob_given_diseases(params, m, d);
    w *= *obs[m] ? on : 1.0 - on;
  }
  return w;
}

void check_evidence_shape(const DiagnosisParams& params, const DiagnosisEvidence& ev) {
  if (ev.diseases().size() != params.num_diseases() ||
      ev.symptoms().size() != params.num_symptoms()) {
    throw DomainError("evidence dimensions do not match the model");
  }
}

}  // namespace

void DiagnosisParams::validate() const {
  const std::size_t nd = num_diseases();
  const std::size_t ns = num_symptoms();
  if (nd == 0 || ns == 0) throw InvalidModel("model needs at least one disease and one symptom");
  if (nd > kMaxDiagnosisDim || ns > kMaxDiagnosisDim) {
    throw DimensionTooLarge("at most 32 diseases and 32 symptoms are supported");
  }
  if (disease_names.size() != nd || symptom_names.size() != ns) {
    throw InvalidModel("name lists do not match the probability tables");
  }
  if (cause.size() != nd) throw InvalidModel("cause table must have one row per disease");
  for (double p : prevalence) {
    if (!in_unit(p)) throw InvalidModel("disease marginal outside [0, 1]");
  }
  for (double l : leak) {
    if (!in_unit(l)) throw InvalidModel("leak probability outside [0, 1]");
  }
  for (const auto& row : cause) {
    if (row.size() != ns) throw InvalidModel("cause table must have one column per symptom");
    for (double c : row) {
      if (!in_unit(c)) throw InvalidModel("cause probability outside [0, 1]");
    }
  }
}

std::optional<std::size_t> DiagnosisParams::disease_index(std::string_view name) const {
  return find_name(disease_names, name);
}

std::optional<std::size_t> DiagnosisParams::symptom_index(std::string_view name) const {
  return find_name(symptom_names, name);
}

const DiagnosisParams& table1_params() {
  static const DiagnosisParams params = parse_diagnosis_model(bundled::table1_model());
  return params;
}

Record DiagnosisSample::to_record() const {
  Record r;
  const std::size_t nd = causes.size();
  for (std::size_t n = 0; n < nd; ++n) r.set("D" + std::to_string(n + 1), disease(n));
  const std::size_t ns = num_symptoms;
  for (std::size_t m = 0; m < ns; ++m) r.set("S" + std::to_string(m + 1), symptom(m));
  for (std::size_t m = 0; m < ns; ++m) r.set("L" + std::to_string(m + 1), static_cast<bool>((leaks >> m) & 1u));
  for (std::size_t n = 0; n < nd; ++n) {
    for (std::size_t m = 0; m < ns; ++m) {
      r.set("C" + std::to_string(n + 1) + "_" + std::to_string(m + 1),
            static_cast<bool>((causes[n] >> m) & 1u));
    }
  }
  return r;
}

bool satisfies_noisy_or(const DiagnosisSample& s) {
  SymptomMask expected = s.leaks;
  for (std::size_t n = 0; n < s.causes.size(); ++n) {
    if (s.disease(n)) expected |= s.causes[n];
  }
  return expected == s.symptoms;
}

DiagnosisSample sample_ds(const DiagnosisParams& params, RandomTape& tape) {
  const std::size_t nd = params.num_diseases();
  const std::size_t ns = params.num_symptoms();
  DiagnosisSample s;
  s.causes.assign(nd, 0);
  s.num_symptoms = ns;
  for (std::size_t n = 0; n < nd; ++n) {
    if (tape.bernoulli(params.prevalence[n])) s.diseases |= DiseaseMask{1} << n;
  }
  for (std::size_t m = 0; m < ns; ++m) {
    if (tape.bernoulli(params.leak[m])) s.leaks |= SymptomMask{1} << m;
  }
  for (std::size_t n = 0; n < nd; ++n) {
    for (std::size_t m = 0; m < ns; ++m) {
      if (tape.bernoulli(params.cause[n][m])) s.causes[n] |= SymptomMask{1} << m;
    }
  }
  s.symptoms = s.leaks;
  for (std::size_t n = 0; n < nd; ++n) {
    if (s.disease(n)) s.symptoms |= s.causes[n];
  }
  return s;
}

GenerativeProgram<DiagnosisSample> ds_program(DiagnosisParams params) {
  params.validate();
  return make_program<DiagnosisSample>(
      [params = std::move(params)](RandomTape& tape) { return sample_ds(params, tape); });
}

double symptom_prob_given_diseases(const DiagnosisParams& params, std::size_t m, DiseaseMask d) {
  if (m >= params.num_symptoms()) throw DomainError("symptom index out of range");
  double off = 1.0 - params.leak[m];
  for (std::size_t n = 0; n < params.num_diseases(); ++n) {
    if ((d >> n) & 1u) off *= 1.0 - params.cause[n][m];
  }
  return 1.0 - off;
}

DiagnosisEvidence DiagnosisEvidence::parse(const DiagnosisParams& params, std::string_view text) {
  DiagnosisEvidence ev(params.num_diseases(), params.num_symptoms());
  std::istringstream in{std::string(text)};
  std::string item;
  while (in >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
      throw DomainError("evidence item '" + item + "' is not of the form NAME=0|1");
    }
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (value != "0" && value != "1") throw DomainError("evidence value must be 0 or 1 in '" + item + "'");
    const bool v = value == "1";

    // D<k> / S<k> by 1-based index, otherwise a table name.
    auto indexed = [&](char prefix) -> std::optional<std::size_t> {
      if (name.size() < 2 || std::toupper(static_cast<unsigned char>(name[0])) != prefix) return std::nullopt;
      std::size_t k = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
      if (ec != std::errc{} || ptr != name.data() + name.size() || k == 0) return std::nullopt;
      return k - 1;
    };
    if (auto n = indexed('D')) {
      if (*n >= params.num_diseases()) throw DomainError("no disease " + name);
      ev.observe_disease(*n, v);
    } else if (auto m = indexed('S')) {
      if (*m >= params.num_symptoms()) throw DomainError("no symptom " + name);
      ev.observe_symptom(*m, v);
    } else if (auto dn = params.disease_index(name)) {
      ev.observe_disease(*dn, v);
    } else if (auto sm = params.symptom_index(name)) {
      ev.observe_symptom(*sm, v);
    } else {
      throw DomainError("unknown variable '" + name + "'");
    }
  }
  return ev;
}

DiagnosisEvidence& DiagnosisEvidence::observe_disease(std::size_t n, bool value) {
  if (n >= diseases_.size()) throw DomainError("disease index out of range");
  diseases_[n] = value;
  return *this;
}

DiagnosisEvidence& DiagnosisEvidence::observe_symptom(std::size_t m, bool value) {
  if (m >= symptoms_.size()) throw DomainError("symptom index out of range");
  symptoms_[m] = value;
  return *this;
}

bool DiagnosisEvidence::empty() const noexcept {
  auto observed = [](const std::optional<bool>& o) { return o.has_value(); };
  return std::none_of(diseases_.begin(), diseases_.end(), observed) &&
         std::none_of(symptoms_.begin(), symptoms_.end(), observed);
}

bool DiagnosisEvidence::matches(DiseaseMask d, SymptomMask s) const noexcept {
  for (std::size_t n = 0; n < diseases_.size(); ++n) {
    if (diseases_[n] && *diseases_[n] != static_cast<bool>((d >> n) & 1u)) return false;
  }
  for (std::size_t m = 0; m < symptoms_.size(); ++m) {
    if (symptoms_[m] && *symptoms_[m] != static_cast<bool>((s >> m) & 1u)) return false;
  }
  return true;
}

bool DiagnosisEvidence::matches(const DiagnosisSample& s) const noexcept {
  return matches(s.diseases, s.symptoms);
}

std::optional<DiagnosisEvidence> DiagnosisEvidence::merged_with(const DiagnosisEvidence& other) const {
  if (other.diseases_.size() != diseases_.size() || other.symptoms_.size() != symptoms_.size()) {
    throw DomainError("evidence dimensions differ");
  }
  DiagnosisEvidence out = *this;
  auto merge = [](std::vector<std::optional<bool>>& into, const std::vector<std::optional<bool>>& from) {
    for (std::size_t i = 0; i < into.size(); ++i) {
      if (!from[i]) continue;
      if (into[i] && *into[i] != *from[i]) return false;
      into[i] = from[i];
    }
    return true;
  };
  if (!merge(out.diseases_, other.diseases_) || !merge(out.symptoms_, other.symptoms_)) {
    return std::nullopt;
  }
  return out;
}

std::string DiagnosisEvidence::to_string() const {
  std::string out;
  auto emit = [&](char prefix, const std::vector<std::optional<bool>>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i]) continue;
      if (!out.empty()) out += ' ';
      out += prefix + std::to_string(i + 1) + (*v[i] ? "=1" : "=0");
    }
  };
  emit('D', diseases_);
  emit('S', symptoms_);
  return out;
}

Predicate<DiagnosisSample> evidence_predicate(DiagnosisEvidence ev) {
  return [ev = std::move(ev)](const DiagnosisSample& s, RandomTape&) { return ev.matches(s); };
}

FiniteModel<DiseaseMask> exact_posterior(const DiagnosisParams& params, const DiagnosisEvidence& ev) {
  require_enumerable(params);
  check_evidence_shape(params, ev);
  const DiseaseMask count = DiseaseMask{1} << params.num_diseases();
  std::vector<std::pair<DiseaseMask, double>> atoms;
  atoms.reserve(count);
  for (DiseaseMask d = 0; d < count; ++d) {
    const double w = evidence_weight(params, ev, d);
    if (w > 0.0) atoms.emplace_back(d, w);
  }
  if (atoms.empty()) throw ZeroMassCondition("evidence '" + ev.to_string() + "' has probability zero");
  return FiniteModel<DiseaseMask>::from_weights(std::move(atoms));
}

double evidence_probability(const DiagnosisParams& params, const DiagnosisEvidence& ev) {
  require_enumerable(params);
  check_evidence_shape(params, ev);
  const DiseaseMask count = DiseaseMask{1} << params.num_diseases();
  double total = 0.0;
  for (DiseaseMask d = 0; d < count; ++d) total += evidence_weight(params, ev, d);
  return total;
}

double forward_prob(const DiagnosisParams& params, const DiagnosisEvidence& target,
                    const DiagnosisEvidence& given) {
  const double denom = evidence_probability(params, given);
  if (!(denom > 0.0)) throw ZeroMassCondition("conditioning event has probability zero");
  const auto joint = target.merged_with(given);
  if (!joint) return 0.0;
  return evidence_probability(params, *joint) / denom;
}

std::vector<double> posterior_marginals(const DiagnosisParams& params, const DiagnosisEvidence& ev) {
  const auto post = exact_posterior(params, ev);
  std::vector<double> out(params.num_diseases(), 0.0);
  for (const auto& [d, w] : post.atoms()) {
    for (std::size_t n = 0; n < out.size(); ++n) {
      if ((d >> n) & 1u) out[n] += w;
    }
  }
  return out;
}

FiniteModel<std::pair<DiseaseMask, SymptomMask>> ds_joint_model(const DiagnosisParams& params) {
  require_enumerable(params);
  const std::size_t nd = params.num_diseases();
  const std::size_t ns = params.num_symptoms();
  if (nd + ns > 26) throw DimensionTooLarge("joint model limited to 26 variables");
  std::vector<std::pair<std::pair<DiseaseMask, SymptomMask>, double>> atoms;
  atoms.reserve(std::size_t{1} << (nd + ns));
  std::vector<double> on(ns);
  for (DiseaseMask d = 0; d < (DiseaseMask{1} << nd); ++d) {
    const double pd = prior_of(params, d);
    for (std::size_t m = 0; m < ns; ++m) on[m] = symptom_prob_given_diseases(params, m, d);
    for (SymptomMask s = 0; s < (SymptomMask{1} << ns); ++s) {
      double w = pd;
      for (std::size_t m = 0; m < ns; ++m) w *= ((s >> m) & 1u) ? on[m] : 1.0 - on[m];
      atoms.emplace_back(std::make_pair(d, s), w);
    }
  }
  return FiniteModel<std::pair<DiseaseMask, SymptomMask>>(std::move(atoms));
}

Dag diagnosis_graph(std::size_t num_diseases, std::size_t num_symptoms) {
  Dag g(num_diseases + num_symptoms);
  for (std::size_t n = 0; n < num_diseases; ++n) {
    for (std::size_t m = 0; m < num_symptoms; ++m) g.add_edge(n, num_diseases + m);
  }
  return g;
}

}  // namespace querysim
