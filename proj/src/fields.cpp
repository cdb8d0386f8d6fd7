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

#include "tablereader/fields.hpp"

#include <fstream>
#include <sstream>

#include "tablereader/alphabet.hpp"
#include "tablereader/common.hpp"

namespace tablereader {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string collapse_whitespace(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string gt_normalize(FieldType type, std::string_view raw) {
  std::string text = collapse_whitespace(raw);
  if (type == FieldType::kName)
    for (char& c : text)
      if (c == '=') c = '_';
  const Alphabet& alphabet = field_alphabet(type);
  return alphabet.render(alphabet.tokenize(text));
}

std::vector<Answer> read_answers(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Answer> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (line.back() == '\t') cols.emplace_back();
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cols.size() < 3) throw FormatError(where + ": expected row_id<TAB>field<TAB>text");
    const auto type = parse_field_type(cols[1]);
    if (!type) throw FormatError(where + ": unknown field type '" + cols[1] + "'");
    out.push_back({cols[0], *type, cols[2]});
  }
  return out;
}

EvalReport evaluate(const std::vector<Answer>& predictions,
                    const std::vector<Answer>& references) {
  std::map<std::pair<std::string, FieldType>, const Answer*> by_key;
  for (const auto& p : predictions) by_key.try_emplace({p.row_id, p.field}, &p);

  EvalReport report;
  for (const auto& ref : references) {
    std::string want;
    try {
      want = gt_normalize(ref.field, ref.text);
    } catch (const FormatError&) {
      ++report.skipped;
      continue;
    }
    auto& stats = report.per_field[ref.field];
    ++stats.evaluated;
    ++report.overall.evaluated;
    const auto it = by_key.find({ref.row_id, ref.field});
    if (it == by_key.end()) {
      ++report.missing;
      continue;
    }
    bool match = false;
    try {
      match = gt_normalize(ref.field, it->second->text) == want;
    } catch (const FormatError&) {
      match = false;
    }
    if (match) {
      ++stats.correct;
      ++report.overall.correct;
    }
  }
  return report;
}

std::string format_report(const EvalReport& report) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  for (const auto& [type, stats] : report.per_field)
    os << to_string(type) << '\t' << stats.accuracy() << '\t' << stats.correct << '/'
       << stats.evaluated << '\n';
  os << "overall\t" << report.overall.accuracy() << '\t' << report.overall.correct << '/'
     << report.overall.evaluated << '\n';
  os << "skipped\t" << report.skipped << "\nmissing\t" << report.missing << '\n';
  return os.str();
}

}  // namespace tablereader
