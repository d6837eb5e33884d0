// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#include "querysim/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "querysim/csv.hpp"
#include "querysim/errors.hpp"

namespace querysim {
namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

// Non-empty lines with comments stripped, split on whitespace.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream in{std::string(line)};
    Line l{number, {}};
    for (std::string tok; in >> tok;) l.tokens.push_back(tok);
    if (!l.tokens.empty()) out.push_back(std::move(l));
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

bool is_section(const Line& l) {
  return l.tokens.size() == 1 && l.tokens[0].size() > 2 && l.tokens[0].front() == '[' &&
         l.tokens[0].back() == ']';
}

std::string section_name(const Line& l) { return l.tokens[0].substr(1, l.tokens[0].size() - 2); }

std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a non-negative integer, got '" + tok + "'", line);
  }
  return v;
}

double parse_prob(const std::string& tok, std::size_t line) {
  auto p = parse_probability(tok);
  if (!p) throw ParseError("expected a probability in [0, 1], got '" + tok + "'", line);
  return *p;
}

std::string join(const std::vector<std::string>& toks, std::size_t first, std::size_t last) {
  std::string s;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) s += ' ';
    s += toks[i];
  }
  return s;
}

// Rows "index name prob" with 1-based dense indices.
void read_named_rows(const std::vector<const Line*>& rows, const char* what,
                     std::vector<std::string>& names, std::vector<double>& probs) {
  std::map<std::size_t, std::pair<std::string, double>> by_index;
  for (const Line* l : rows) {
    if (l->tokens.size() < 3) throw ParseError(std::string(what) + " row needs index, name and probability", l->number);
    const std::size_t idx = parse_index(l->tokens[0], l->number);
    if (idx == 0) throw ParseError(std::string(what) + " indices start at 1", l->number);
    if (by_index.contains(idx)) throw ParseError("duplicate " + std::string(what) + " index", l->number);
    by_index[idx] = {join(l->tokens, 1, l->tokens.size() - 1), parse_prob(l->tokens.back(), l->number)};
  }
  std::size_t expect = 1;
  for (auto& [idx, entry] : by_index) {
    if (idx != expect) {
      throw ParseError(std::string(what) + " indices must run 1.." + std::to_string(by_index.size()),
                       rows.empty() ? 0 : rows.back()->number);
    }
    ++expect;
    names.push_back(entry.first);
    probs.push_back(entry.second);
  }
}

std::map<std::string, std::vector<const Line*>> split_sections(const std::vector<Line>& lines,
                                                               const std::set<std::string>& allowed) {
  std::map<std::string, std::vector<const Line*>> sections;
  std::string current;
  std::set<std::string> seen;
  for (const Line& l : lines) {
    if (is_section(l)) {
      current = section_name(l);
      if (!allowed.contains(current)) throw ParseError("unknown section [" + current + "]", l.number);
      if (!seen.insert(current).second) throw ParseError("section [" + current + "] repeated", l.number);
      sections[current];
      continue;
    }
    if (current.empty()) throw ParseError("row outside any section", l.number);
    sections[current].push_back(&l);
  }
  return sections;
}

}  // namespace

std::optional<double> parse_probability(std::string_view tok) {
  // digits [. digits] or . digits; no sign, no exponent.
  bool digit_seen = false, dot_seen = false;
  for (char c : tok) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit_seen = true;
    } else if (c == '.' && !dot_seen) {
      dot_seen = true;
    } else {
      return std::nullopt;
    }
  }
  if (!digit_seen) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, std::chars_format::fixed);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  if (!(v >= 0.0 && v <= 1.0)) return std::nullopt;
  return v;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DiagnosisParams parse_diagnosis_model(std::string_view text) {
  const auto lines = tokenize(text);
  auto sections = split_sections(lines, {"diseases", "symptoms", "causes"});
  DiagnosisParams p;
  read_named_rows(sections["diseases"], "disease", p.disease_names, p.prevalence);
  read_named_rows(sections["symptoms"], "symptom", p.symptom_names, p.leak);
  if (p.num_diseases() == 0 || p.num_symptoms() == 0) {
    throw ParseError("model needs at least one disease and one symptom", lines.empty() ? 0 : lines.back().number);
  }
  if (p.num_diseases() > kMaxDiagnosisDim || p.num_symptoms() > kMaxDiagnosisDim) {
    throw DimensionTooLarge("at most 32 diseases and 32 symptoms are supported");
  }
  p.cause.assign(p.num_diseases(), std::vector<double>(p.num_symptoms(), 0.0));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Line* l : sections["causes"]) {
    if (l->tokens.size() != 3) throw ParseError("cause row needs disease, symptom and probability", l->number);
    const std::size_t n = parse_index(l->tokens[0], l->number);
    const std::size_t m = parse_index(l->tokens[1], l->number);
    if (n < 1 || n > p.num_diseases()) throw ParseError("disease index out of range", l->number);
    if (m < 1 || m > p.num_symptoms()) throw ParseError("symptom index out of range", l->number);
    if (!seen.insert({n, m}).second) throw ParseError("duplicate cause entry", l->number);
    p.cause[n - 1][m - 1] = parse_prob(l->tokens[2], l->number);
  }
  p.validate();
  return p;
}

DiagnosisParams load_diagnosis_model(const std::filesystem::path& path) {
  return parse_diagnosis_model(read_text_file(path));
}

std::string format_diagnosis_model(const DiagnosisParams& p) {
  std::ostringstream out;
  out << "[diseases]\n";
  for (std::size_t n = 0; n < p.num_diseases(); ++n) {
    out << n + 1 << ' ' << p.disease_names[n] << ' ' << format_number(p.prevalence[n]) << '\n';
  }
  out << "\n[symptoms]\n";
  for (std::size_t m = 0; m < p.num_symptoms(); ++m) {
    out << m + 1 << ' ' << p.symptom_names[m] << ' ' << format_number(p.leak[m]) << '\n';
  }
  out << "\n[causes]\n";
  for (std::size_t n = 0; n < p.num_diseases(); ++n) {
    for (std::size_t m = 0; m < p.num_symptoms(); ++m) {
      out << n + 1 << ' ' << m + 1 << ' ' << format_number(p.cause[n][m]) << '\n';
    }
  }
  return out.str();
}

BeliefStateModel parse_belief_model(std::string_view text) {
  const auto lines = tokenize(text);
  auto sections = split_sections(lines, {"states", "edges", "terminals", "horizon"});

  std::map<std::size_t, std::string> by_index;
  std::map<std::string, std::size_t> index_of;
  for (const Line* l : sections["states"]) {
    if (l->tokens.size() != 2) throw ParseError("state row needs index and name", l->number);
    const std::size_t idx = parse_index(l->tokens[0], l->number);
    if (by_index.contains(idx)) throw ParseError("duplicate state index", l->number);
    if (index_of.contains(l->tokens[1])) throw ParseError("duplicate state name", l->number);
    by_index[idx] = l->tokens[1];
    index_of[l->tokens[1]] = idx;
  }
  if (by_index.empty()) throw ParseError("belief model has no states", lines.empty() ? 0 : lines.back().number);
  std::vector<BeliefState> states(by_index.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!by_index.contains(i)) throw ParseError("state indices must run 0.." + std::to_string(states.size() - 1), 0);
    states[i].name = by_index[i];
  }
  auto lookup = [&](const std::string& name, std::size_t line) {
    auto it = index_of.find(name);
    if (it == index_of.end()) throw ParseError("unknown state '" + name + "'", line);
    return it->second;
  };

  for (const Line* l : sections["edges"]) {
    const auto& t = l->tokens;
    if (t.size() < 4 || t.size() % 2 != 0) {
      throw ParseError("edge row is: state action target prob [target prob ...]", l->number);
    }
    BeliefState& from = states[lookup(t[0], l->number)];
    for (const auto& a : from.actions) {
      if (a.name == t[1]) throw ParseError("action '" + t[1] + "' repeated at '" + t[0] + "'", l->number);
    }
    ActionEdge edge{t[1], {}};
    for (std::size_t i = 2; i < t.size(); i += 2) {
      edge.transitions.push_back({lookup(t[i], l->number), parse_prob(t[i + 1], l->number)});
    }
    from.actions.push_back(std::move(edge));
  }

  for (const Line* l : sections["terminals"]) {
    if (l->tokens.size() != 2) throw ParseError("terminal row needs name and success|failure", l->number);
    BeliefState& s = states[lookup(l->tokens[0], l->number)];
    if (s.terminal != Terminal::kNone) throw ParseError("terminal listed twice", l->number);
    if (l->tokens[1] == "success") {
      s.terminal = Terminal::kSuccess;
    } else if (l->tokens[1] == "failure") {
      s.terminal = Terminal::kFailure;
    } else {
      throw ParseError("terminal mark must be success or failure", l->number);
    }
  }

  std::optional<std::size_t> horizon;
  if (sections.contains("horizon")) {
    const auto& rows = sections["horizon"];
    if (rows.size() != 1 || rows[0]->tokens.size() != 1) {
      throw ParseError("[horizon] holds a single integer", rows.empty() ? 0 : rows[0]->number);
    }
    horizon = parse_index(rows[0]->tokens[0], rows[0]->number);
  }
  return BeliefStateModel(std::move(states), horizon);
}

BeliefStateModel load_belief_model(const std::filesystem::path& path) {
  return parse_belief_model(read_text_file(path));
}

std::string format_belief_model(const BeliefStateModel& model) {
  std::ostringstream out;
  out << "[states]\n";
  for (std::size_t s = 0; s < model.size(); ++s) out << s << ' ' << model.state(s).name << '\n';
  out << "\n[edges]\n";
  for (const auto& st : model.states()) {
    for (const auto& a : st.actions) {
      out << st.name << ' ' << a.name;
      for (const auto& t : a.transitions) {
        out << ' ' << model.state(t.target).name << ' ' << format_number(t.probability);
      }
      out << '\n';
    }
  }
  out << "\n[terminals]\n";
  for (const auto& st : model.states()) {
    if (st.terminal != Terminal::kNone) {
      out << st.name << ' ' << (st.terminal == Terminal::kSuccess ? "success" : "failure") << '\n';
    }
  }
  if (!model.is_acyclic()) out << "\n[horizon]\n" << model.horizon() << '\n';
  return out.str();
}

Dataset parse_dataset(std::string_view text, std::optional<std::size_t> width) {
  Dataset d;
  d.width = width.value_or(0);
  bool fixed = width.has_value();
  for (const Line& l : tokenize(text)) {
    if (!fixed) {
      d.width = l.tokens.size();
      fixed = true;
    }
    if (l.tokens.size() != d.width) {
      throw WidthMismatch("line " + std::to_string(l.number) + ": expected " +
                          std::to_string(d.width) + " values, got " +
                          std::to_string(l.tokens.size()));
    }
    if (d.width > Dag::kMaxVertices) throw DimensionTooLarge("at most 32 columns are supported");
    VertexMask row = 0;
    for (std::size_t j = 0; j < l.tokens.size(); ++j) {
      if (l.tokens[j] == "1") {
        row |= VertexMask{1} << j;
      } else if (l.tokens[j] != "0") {
        throw ParseError("data values must be 0 or 1", l.number);
      }
    }
    d.rows.push_back(row);
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path& path, std::optional<std::size_t> width) {
  return parse_dataset(read_text_file(path), width);
}

std::string format_dataset(const Dataset& data) {
  std::string out;
  for (VertexMask row : data.rows) {
    for (std::size_t j = 0; j < data.width; ++j) {
      if (j) out += ' ';
      out += ((row >> j) & 1u) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

}  // namespace querysim
