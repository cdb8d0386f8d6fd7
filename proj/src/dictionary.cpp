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

#include "tablereader/dictionary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "tablereader/common.hpp"

namespace tablereader {

Dictionary::Dictionary(const std::vector<std::pair<std::string, double>>& words,
                       const Alphabet& alphabet)
    : alphabet_(alphabet) {
  std::map<std::string, double> merged;
  for (const auto& [word, count] : words) {
    if (word.empty()) throw FormatError("dictionary: empty word");
    if (!(count >= 0.0) || !std::isfinite(count))
      throw FormatError("dictionary: invalid count for '" + word + "'");
    merged[word] += count;
  }
  entries_.reserve(merged.size());
  for (const auto& [word, count] : merged)
    entries_.push_back({word, alphabet_.tokenize(word), count});

  double pseudo = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_)
    if (e.count > 0.0) pseudo = std::min(pseudo, e.count);
  if (!std::isfinite(pseudo)) pseudo = 1.0;

  double total = 0.0;
  for (const auto& e : entries_) total += e.count + pseudo;
  log_priors_.reserve(entries_.size());
  const double log_total = std::log(total);
  for (const auto& e : entries_) log_priors_.push_back(std::log(e.count + pseudo) - log_total);
}

Dictionary Dictionary::load(const std::filesystem::path& path, const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dictionary " + path.string());
  std::vector<std::pair<std::string, double>> words;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (tab == std::string::npos) throw FormatError(where + ": expected count<TAB>word");
    double count = 0.0;
    const char* first = line.data();
    const char* last = line.data() + tab;
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last) throw FormatError(where + ": bad count");
    std::string word = line.substr(tab + 1);
    try {
      alphabet.tokenize(word);
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
    words.emplace_back(std::move(word), count);
  }
  return Dictionary(words, alphabet);
}

double Dictionary::prior(std::size_t i) const { return std::exp(log_priors_[i]); }

Dictionary Dictionary::most_frequent(std::size_t m) const {
  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entries_[a].count > entries_[b].count;  // entries_ is already word-sorted
  });
  if (order.size() > m) order.resize(m);
  std::vector<std::pair<std::string, double>> words;
  words.reserve(order.size());
  for (std::size_t i : order) words.emplace_back(entries_[i].word, entries_[i].count);
  return Dictionary(words, alphabet_);
}

}  // namespace tablereader
