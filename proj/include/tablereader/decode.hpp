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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tablereader/dictionary.hpp"
#include "tablereader/output_matrix.hpp"
#include "tablereader/parallel.hpp"

namespace tablereader::decode {

struct DecodeParams {
  double alpha = 0.0;  // length normalization exponent
  double beta = 0.0;   // prior weight

  bool operator==(const DecodeParams&) const = default;
};

struct ScoredWord {
  std::string word;
  double cost = 0.0;
  int member = 0;          // committee member that produced the cost
  std::size_t entry = 0;   // dictionary index

  bool operator==(const ScoredWord&) const = default;
};

// Output matrices of all committee members for one writing.
using Committee = std::vector<OutputMatrix>;

// (-ln p(w|m)) / |w|^alpha - beta * ln p(w); +inf when w cannot be emitted
// in m's frames. |w| counts alphabet symbols.
double word_cost(const OutputMatrix& m, const LabelSequence& word, double log_prior,
                 const DecodeParams& params);

// Same formula from a precomputed -ln p(w|m).
double cost_from_nlp(double neg_log_prob, std::size_t length, double log_prior,
                     const DecodeParams& params);

// Strict weak order used everywhere: lower cost, then word, then member.
bool better(const ScoredWord& a, const ScoredWord& b);

// Minimum-cost entry. Throws on an empty dictionary; nullopt when every
// entry is infeasible.
std::optional<ScoredWord> best_word(const OutputMatrix& m, const Dictionary& dict,
                                    const DecodeParams& params,
                                    Execution exec = Execution::kParallel);

// Minimum over (word, member) pairs.
std::optional<ScoredWord> committee_best(const Committee& committee, const Dictionary& dict,
                                         const DecodeParams& params,
                                         Execution exec = Execution::kParallel);

// Every entry with its committee cost (minimum over members), sorted by
// `better`, truncated to k. Infeasible entries sort last with +inf cost.
std::vector<ScoredWord> top_k(const Committee& committee, const Dictionary& dict,
                              const DecodeParams& params, std::size_t k,
                              Execution exec = Execution::kParallel);

// Costs of every (member, entry) pair: result[member][entry].
std::vector<std::vector<double>> neg_log_probs(const Committee& committee,
                                               const Dictionary& dict,
                                               Execution exec = Execution::kParallel);

// ----------------------------------------------------------------- NAME

struct NameDecodeParams {
  DecodeParams family{0.50, 0.50};
  DecodeParams given{0.25, 0.25};
  std::size_t cap = 200;  // per-dictionary candidate cap (most frequent first)
};

struct NameResult {
  ScoredWord family;  // cost = family share of the joint score
  ScoredWord given;   // cost = given-name share
  double cost = 0.0;  // family.cost + given.cost
  int member = 0;
};

// Scores every "family given" string of the capped cross product by its
// full CTC probability. The total -ln p is split between the two parts in
// proportion to their symbol counts; each share is then length-normalized
// and prior-weighted with its own parameters. `space` is the alphabet index
// of the separating blank character.
std::optional<NameResult> decode_name_field(const Committee& committee,
                                            const Dictionary& family_dict,
                                            const Dictionary& given_dict, int space,
                                            const NameDecodeParams& params,
                                            Execution exec = Execution::kParallel);

// The k best (family, given) pairs, each with its best member.
std::vector<NameResult> name_top_k(const Committee& committee, const Dictionary& family_dict,
                                   const Dictionary& given_dict, int space,
                                   const NameDecodeParams& params, std::size_t k,
                                   Execution exec = Execution::kParallel);

// Joint score of one pair; shared by decode_name_field and its tests.
double name_pair_cost(double neg_log_prob, std::size_t family_len, double family_log_prior,
                      std::size_t given_len, double given_log_prior,
                      const NameDecodeParams& params, double* family_share = nullptr,
                      double* given_share = nullptr);

// ------------------------------------------------------------ ditto marks

inline constexpr const char* kDittoMark = "_";

struct DittoResolved {
  std::string family;
  bool unresolved = false;  // "_" with no preceding name in the column
};

// "_" takes the nearest preceding non-underscore family name of the column.
std::vector<DittoResolved> normalize_family_ditto(const std::vector<std::string>& families);

// ------------------------------------------------------------ grid search

struct ValidationItem {
  Committee committee;
  std::string reference;
};

struct GridPoint {
  DecodeParams params;
  double accuracy = 0.0;
};

struct GridSearchResult {
  DecodeParams best;
  double accuracy = 0.0;
  std::vector<GridPoint> table;  // every evaluated point
};

// Exact-match word accuracy at every (alpha, beta) of the grid. Ties prefer
// the smaller alpha, then the smaller beta.
GridSearchResult grid_search_params(const std::vector<ValidationItem>& items,
                                    const Dictionary& dict, std::vector<double> alphas,
                                    std::vector<double> betas,
                                    Execution exec = Execution::kParallel);

// The grids searched by default: alpha in {0.25, 0.5, 0.75, 1.0} and
// beta in {0.0, 0.25, 0.5}.
std::vector<double> default_alpha_grid();
std::vector<double> default_beta_grid();

}  // namespace tablereader::decode
