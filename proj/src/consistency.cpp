// Copyright 2026 The TableReader Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tablereader/consistency.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "tablereader/common.hpp"

namespace tablereader::consistency {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view first_word(std::string_view s) {
  const auto start = s.find_first_not_of(' ');
  if (start == std::string_view::npos) return {};
  s.remove_prefix(start);
  return s.substr(0, s.find(' '));
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cols;
}

char parse_gender(const std::string& s, const std::string& where) {
  const std::string g = lower(s);
  if (g == "m" || g == "f") return g[0];
  throw FormatError(where + ": gender must be m or f, got '" + s + "'");
}

double parse_positive(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v) || v <= 0.0)
    throw FormatError(where + ": expected a positive number, got '" + s + "'");
  return v;
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(split_tabs(line), path.string() + ":" + std::to_string(lineno));
  }
}

const FieldAnswers* find(const Row& row, const char* key) {
  const auto it = row.fields.find(key);
  if (it == row.fields.end() || it->second.alternatives.empty()) return nullptr;
  return &it->second;
}

// Would the rule still fire if `field` answered `word`?
bool resolves(const ConsistencyRule& rule, const std::string& field, const std::string& word,
              const GenderLexicon& lexicon) {
  if (field == kRelationField) return lower(word) != lower(rule.relation_value);
  const auto g = lexicon.gender(word);
  return g && *g == rule.required_gender;
}

}  // namespace

GenderLexicon GenderLexicon::load(const std::filesystem::path& path) {
  GenderLexicon lex;
  for_each_line(path, [&](const std::vector<std::string>& cols, const std::string& where) {
    if (cols.size() < 2 || cols[0].empty()) throw FormatError(where + ": expected name<TAB>m|f");
    lex.add(cols[0], parse_gender(cols[1], where));
  });
  return lex;
}

void GenderLexicon::add(std::string_view name, char gender) {
  if (gender != 'm' && gender != 'f') throw Error("gender must be 'm' or 'f'");
  names_[lower(name)] = gender;
}

std::optional<char> GenderLexicon::gender(std::string_view given) const {
  const auto it = names_.find(lower(first_word(given)));
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

std::vector<ConsistencyRule> load_rules(const std::filesystem::path& path) {
  std::vector<ConsistencyRule> rules;
  for_each_line(path, [&](const std::vector<std::string>& cols, const std::string& where) {
    if (cols.size() < 4) throw FormatError(where + ": expected id<TAB>relation<TAB>gender<TAB>target");
    ConsistencyRule r;
    r.id = cols[0];
    r.relation_value = cols[1];
    r.required_gender = parse_gender(cols[2], where);
    r.target = cols[3];
    if (r.target != kGivenField && r.target != kRelationField && r.target != kAutoTarget)
      throw FormatError(where + ": unknown target field '" + r.target + "'");
    if (cols.size() > 4 && !cols[4].empty()) r.penalty = parse_positive(cols[4], where);
    if (cols.size() > 5 && !cols[5].empty()) r.margin = parse_positive(cols[5], where);
    rules.push_back(std::move(r));
  });
  return rules;
}

bool fires(const ConsistencyRule& rule, const Row& row, const GenderLexicon& lexicon) {
  const FieldAnswers* relation = find(row, kRelationField);
  const FieldAnswers* given = find(row, kGivenField);
  if (relation == nullptr || given == nullptr) return false;
  if (lower(relation->current().word) != lower(rule.relation_value)) return false;
  const auto g = lexicon.gender(given->current().word);
  return g && *g != rule.required_gender;
}

Outcome apply_consistency(const Row& row, std::vector<ConsistencyRule> rules,
                          const GenderLexicon& lexicon) {
  std::stable_sort(rules.begin(), rules.end(),
                   [](const ConsistencyRule& a, const ConsistencyRule& b) { return a.id < b.id; });
  Outcome out{row, {}};
  for (const auto& rule : rules) {
    if (!fires(rule, out.row, lexicon)) continue;

    std::string target = rule.target;
    if (target == kAutoTarget) {
      // The more unlikely of the two answers takes the blame.
      const double given_cost = find(out.row, kGivenField)->current().cost;
      const double relation_cost = find(out.row, kRelationField)->current().cost;
      target = relation_cost > given_cost ? kRelationField : kGivenField;
    }
    FieldAnswers& answers = out.row.fields.at(target);
    const auto& cur = answers.current();
    Event ev{rule.id, out.row.id, target, false, cur.word, cur.word, cur.cost + rule.penalty};

    for (std::size_t j = 0; j < answers.alternatives.size(); ++j) {
      if (j == answers.selected) continue;
      const auto& alt = answers.alternatives[j];
      if (!resolves(rule, target, alt.word, lexicon)) continue;
      if (alt.cost < ev.penalized && alt.cost - cur.cost <= rule.margin) {
        ev.switched = true;
        ev.to = alt.word;
        answers.selected = j;
      }
      break;  // only the best resolving alternative is considered
    }
    out.log.push_back(std::move(ev));
  }
  return out;
}

}  // namespace tablereader::consistency
