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

#pragma once

// Random decoding fixtures with independent scan oracles. Costs come from
// brute-force path enumeration, so the oracle shares no code with the
// forward algorithm.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tablereader/decode.hpp"

namespace fixtures {

inline const tablereader::Alphabet& abcd() {
  static const tablereader::Alphabet a({"a", "b", "c", "d"}, "abcd");
  return a;
}

struct DecodeFixture {
  tablereader::decode::Committee committee;
  std::vector<std::pair<std::string, double>> words;  // (word, count)
  tablereader::decode::DecodeParams params;
  bool tie_planted = false;
};

inline std::string random_word(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len), sym(0, 3);
  std::string w;
  const int l = len(rng);
  for (int i = 0; i < l; ++i) w.push_back(static_cast<char>('a' + sym(rng)));
  return w;
}

// Columns for 'a' and 'b' identical in every member when `tie`, and counts
// invariant under swapping a and b, so words differing only in a/b tie exactly.
inline DecodeFixture make_fixture(std::mt19937_64& rng, std::size_t max_dict, int max_members,
                                  bool tie) {
  DecodeFixture f;
  f.tie_planted = tie;
  std::uniform_int_distribution<int> tdist(3, 7), members(1, max_members), count(0, 60);
  std::uniform_int_distribution<std::size_t> dsize(1, max_dict);
  const std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> betas{0.0, 0.25, 0.5, 1.0};
  f.params = {alphas[rng() % alphas.size()], betas[rng() % betas.size()]};
  const int T = tdist(rng);
  const int n_members = members(rng);
  for (int i = 0; i < n_members; ++i) {
    auto m = oracle::random_matrix(T, 5, rng);
    if (tie) {
      tablereader::ColumnMatrix p = m.probs();
      for (int t = 0; t < T; ++t) p.at(t, 1) = p.at(t, 0);
      for (int t = 0; t < T; ++t) {
        double s = 0.0;
        for (int k = 0; k < 5; ++k) s += p.at(t, k);
        for (int k = 0; k < 5; ++k) p.at(t, k) /= s;
      }
      m = tablereader::OutputMatrix::from_probabilities(p);
    }
    f.committee.push_back(m);
  }
  const std::size_t target = dsize(rng);
  std::map<std::string, double> chosen;
  std::map<std::string, double> canon_count;
  for (int attempts = 0; chosen.size() < target && attempts < 20000; ++attempts) {
    std::string w = random_word(rng, 5);
    if (tie) {
      std::string c = w;
      std::replace(c.begin(), c.end(), 'b', 'a');
      auto [it, fresh] = canon_count.try_emplace(c, count(rng));
      chosen[w] = it->second;
      // Plant the a/b mirror so a tie really exists.
      std::string mirror = w;
      for (char& ch : mirror) ch = ch == 'a' ? 'b' : ch == 'b' ? 'a' : ch;
      if (chosen.size() < target) chosen[mirror] = it->second;
    } else {
      chosen.try_emplace(w, count(rng));
    }
  }
  f.words.assign(chosen.begin(), chosen.end());
  return f;
}

// Independent smoothed log-priors (pseudo-count = smallest positive count).
inline std::map<std::string, double> oracle_log_priors(
    const std::vector<std::pair<std::string, double>>& words) {
  double pseudo = std::numeric_limits<double>::infinity();
  for (const auto& [w, c] : words)
    if (c > 0) pseudo = std::min(pseudo, c);
  if (!std::isfinite(pseudo)) pseudo = 1.0;
  double total = 0.0;
  for (const auto& [w, c] : words) total += c + pseudo;
  std::map<std::string, double> out;
  for (const auto& [w, c] : words) out[w] = std::log((c + pseudo) / total);
  return out;
}

inline std::vector<int> labels_of(const std::string& w) {
  std::vector<int> l;
  for (char c : w) l.push_back(c - 'a');
  return l;
}

struct OracleChoice {
  std::string word;
  int member = 0;
  double cost = 0.0;
};

// Exhaustive scan over (word, member). Costs within 1e-9 relative of the
// minimum count as ties and are resolved by word, then member.
inline std::vector<OracleChoice> oracle_costs(const DecodeFixture& f) {
  const auto priors = oracle_log_priors(f.words);
  std::vector<OracleChoice> all;
  for (std::size_t i = 0; i < f.committee.size(); ++i) {
    const auto sums = oracle::path_sums(f.committee[i]);
    for (const auto& [w, c] : f.words) {
      const auto it = sums.find(labels_of(w));
      const double p = it == sums.end() ? 0.0 : it->second;
      double cost = std::numeric_limits<double>::infinity();
      if (p > 0.0)
        cost = -std::log(p) / std::pow(static_cast<double>(w.size()), f.params.alpha) -
               f.params.beta * priors.at(w);
      all.push_back({w, static_cast<int>(i), cost});
    }
  }
  return all;
}

inline bool near(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

inline std::optional<OracleChoice> oracle_best(const std::vector<OracleChoice>& all) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& c : all) lo = std::min(lo, c.cost);
  if (std::isinf(lo)) return std::nullopt;
  std::optional<OracleChoice> best;
  for (const auto& c : all) {
    if (!near(c.cost, lo)) continue;
    if (!best || c.word < best->word || (c.word == best->word && c.member < best->member)) best = c;
  }
  return best;
}

}  // namespace fixtures
