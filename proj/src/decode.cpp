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

#include "tablereader/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tablereader/common.hpp"
#include "tablereader/ctc.hpp"

namespace tablereader::decode {

namespace {

constexpr double kInf = ctc::kInfeasible;

void check_committee(const Committee& committee, const Dictionary& dict) {
  if (committee.empty()) throw Error("decode: empty committee");
  for (const auto& m : committee)
    if (m.classes() != dict.alphabet().size())
      throw Error("decode: output matrix has " + std::to_string(m.classes()) +
                  " classes, dictionary alphabet has " +
                  std::to_string(dict.alphabet().size()));
}

std::vector<std::size_t> frequent_indices(const Dictionary& dict, std::size_t cap) {
  std::vector<std::size_t> order(dict.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dict[a].count > dict[b].count;
  });
  if (order.size() > cap) order.resize(cap);
  return order;
}

}  // namespace

double cost_from_nlp(double neg_log_prob, std::size_t length, double log_prior,
                     const DecodeParams& params) {
  if (!std::isfinite(neg_log_prob)) return kInf;
  return neg_log_prob / std::pow(static_cast<double>(length), params.alpha) -
         params.beta * log_prior;
}

double word_cost(const OutputMatrix& m, const LabelSequence& word, double log_prior,
                 const DecodeParams& params) {
  if (word.empty()) throw Error("word_cost: empty word");
  return cost_from_nlp(ctc::neg_log_prob(m, word), word.size(), log_prior, params);
}

bool better(const ScoredWord& a, const ScoredWord& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.word != b.word) return a.word < b.word;
  return a.member < b.member;
}

std::vector<std::vector<double>> neg_log_probs(const Committee& committee,
                                               const Dictionary& dict, Execution exec) {
  check_committee(committee, dict);
  const std::size_t members = committee.size();
  const std::size_t n = dict.size();
  std::vector<std::vector<double>> out(members, std::vector<double>(n, kInf));
  const auto total = static_cast<std::ptrdiff_t>(members * n);
#pragma omp parallel for schedule(dynamic, 8) if (exec == Execution::kParallel)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto member = static_cast<std::size_t>(i) / n;
    const auto entry = static_cast<std::size_t>(i) % n;
    out[member][entry] = ctc::neg_log_prob(committee[member], dict[entry].labels);
  }
  return out;
}

namespace {

// Per-entry committee minimum, ties to the lowest member.
std::vector<ScoredWord> committee_scores(const Committee& committee, const Dictionary& dict,
                                         const DecodeParams& params, Execution exec) {
  if (dict.empty()) throw Error("decode: empty dictionary");
  const auto nlp = neg_log_probs(committee, dict, exec);
  std::vector<ScoredWord> scores(dict.size());
  for (std::size_t e = 0; e < dict.size(); ++e) {
    ScoredWord s{dict[e].word, kInf, 0, e};
    for (std::size_t member = 0; member < committee.size(); ++member) {
      const double c =
          cost_from_nlp(nlp[member][e], dict[e].labels.size(), dict.log_prior(e), params);
      if (c < s.cost) {
        s.cost = c;
        s.member = static_cast<int>(member);
      }
    }
    scores[e] = std::move(s);
  }
  return scores;
}

std::optional<ScoredWord> pick(const std::vector<ScoredWord>& scores) {
  const ScoredWord* best = nullptr;
  for (const auto& s : scores)
    if (std::isfinite(s.cost) && (best == nullptr || better(s, *best))) best = &s;
  if (best == nullptr) return std::nullopt;
  return *best;
}

}  // namespace

std::optional<ScoredWord> best_word(const OutputMatrix& m, const Dictionary& dict,
                                    const DecodeParams& params, Execution exec) {
  return pick(committee_scores(Committee{m}, dict, params, exec));
}

std::optional<ScoredWord> committee_best(const Committee& committee, const Dictionary& dict,
                                         const DecodeParams& params, Execution exec) {
  return pick(committee_scores(committee, dict, params, exec));
}

std::vector<ScoredWord> top_k(const Committee& committee, const Dictionary& dict,
                              const DecodeParams& params, std::size_t k, Execution exec) {
  auto scores = committee_scores(committee, dict, params, exec);
  std::sort(scores.begin(), scores.end(), better);
  if (scores.size() > k) scores.resize(k);
  return scores;
}

double name_pair_cost(double neg_log_prob, std::size_t family_len, double family_log_prior,
                      std::size_t given_len, double given_log_prior,
                      const NameDecodeParams& params, double* family_share,
                      double* given_share) {
  double cf = kInf;
  double cg = kInf;
  if (std::isfinite(neg_log_prob)) {
    const double total_len = static_cast<double>(family_len + given_len);
    cf = cost_from_nlp(neg_log_prob * static_cast<double>(family_len) / total_len, family_len,
                       family_log_prior, params.family);
    cg = cost_from_nlp(neg_log_prob * static_cast<double>(given_len) / total_len, given_len,
                       given_log_prior, params.given);
  }
  if (family_share != nullptr) *family_share = cf;
  if (given_share != nullptr) *given_share = cg;
  return cf + cg;
}

std::vector<NameResult> name_top_k(const Committee& committee, const Dictionary& family_dict,
                                   const Dictionary& given_dict, int space,
                                   const NameDecodeParams& params, std::size_t k,
                                   Execution exec) {
  if (family_dict.empty() || given_dict.empty()) throw Error("decode_name_field: empty dictionary");
  check_committee(committee, family_dict);
  check_committee(committee, given_dict);
  if (space < 0 || space >= family_dict.alphabet().garbage_index())
    throw Error("decode_name_field: separator index outside the alphabet");

  const auto fam = frequent_indices(family_dict, params.cap);
  const auto giv = frequent_indices(given_dict, params.cap);
  const std::size_t members = committee.size();
  const std::size_t pairs = fam.size() * giv.size();

  // nlp[pair * members + member]
  std::vector<double> nlp(pairs * members, kInf);
  const auto total = static_cast<std::ptrdiff_t>(pairs * members);
#pragma omp parallel for schedule(dynamic, 16) if (exec == Execution::kParallel)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto pair = static_cast<std::size_t>(i) / members;
    const auto member = static_cast<std::size_t>(i) % members;
    const auto& f = family_dict[fam[pair / giv.size()]].labels;
    const auto& g = given_dict[giv[pair % giv.size()]].labels;
    LabelSequence joint;
    joint.reserve(f.size() + g.size() + 1);
    joint.insert(joint.end(), f.begin(), f.end());
    joint.push_back(space);
    joint.insert(joint.end(), g.begin(), g.end());
    nlp[static_cast<std::size_t>(i)] = ctc::neg_log_prob(committee[member], joint);
  }

  // Best member per pair, then the global order (cost, "family given", member).
  struct Scored {
    NameResult result;
    std::string text;
  };
  std::vector<Scored> scored;
  for (std::size_t pair = 0; pair < pairs; ++pair) {
    const std::size_t fi = fam[pair / giv.size()];
    const std::size_t gi = giv[pair % giv.size()];
    const auto& f = family_dict[fi];
    const auto& g = given_dict[gi];
    std::optional<NameResult> best;
    for (std::size_t member = 0; member < members; ++member) {
      double cf = 0.0;
      double cg = 0.0;
      const double c = name_pair_cost(nlp[pair * members + member], f.labels.size(),
                                      family_dict.log_prior(fi), g.labels.size(),
                                      given_dict.log_prior(gi), params, &cf, &cg);
      if (!std::isfinite(c) || (best && c >= best->cost)) continue;
      const int mi = static_cast<int>(member);
      best = NameResult{ScoredWord{f.word, cf, mi, fi}, ScoredWord{g.word, cg, mi, gi}, c, mi};
    }
    if (best) scored.push_back({*best, f.word + " " + g.word});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.result.cost != b.result.cost) return a.result.cost < b.result.cost;
    if (a.text != b.text) return a.text < b.text;
    return a.result.member < b.result.member;
  });
  if (scored.size() > k) scored.resize(k);
  std::vector<NameResult> out;
  out.reserve(scored.size());
  for (auto& s : scored) out.push_back(std::move(s.result));
  return out;
}

std::optional<NameResult> decode_name_field(const Committee& committee,
                                            const Dictionary& family_dict,
                                            const Dictionary& given_dict, int space,
                                            const NameDecodeParams& params, Execution exec) {
  auto top = name_top_k(committee, family_dict, given_dict, space, params, 1, exec);
  if (top.empty()) return std::nullopt;
  return top.front();
}

std::vector<DittoResolved> normalize_family_ditto(const std::vector<std::string>& families) {
  std::vector<DittoResolved> out;
  out.reserve(families.size());
  const std::string* last = nullptr;
  for (const auto& f : families) {
    if (f == kDittoMark) {
      if (last != nullptr)
        out.push_back({*last, false});
      else
        out.push_back({f, true});
    } else {
      out.push_back({f, false});
      last = &f;
    }
  }
  return out;
}

std::vector<double> default_alpha_grid() { return {0.25, 0.5, 0.75, 1.0}; }
std::vector<double> default_beta_grid() { return {0.0, 0.25, 0.5}; }

GridSearchResult grid_search_params(const std::vector<ValidationItem>& items,
                                    const Dictionary& dict, std::vector<double> alphas,
                                    std::vector<double> betas, Execution exec) {
  if (items.empty()) throw Error("grid_search_params: no validation items");
  if (dict.empty()) throw Error("grid_search_params: empty dictionary");
  if (alphas.empty() || betas.empty()) throw Error("grid_search_params: empty grid");
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());

  // CTC once per (item, member, entry); the grid only reweights.
  std::vector<std::vector<std::vector<double>>> nlp(items.size());
  for (std::size_t i = 0; i < items.size(); ++i)
    nlp[i] = neg_log_probs(items[i].committee, dict, exec);

  GridSearchResult result;
  bool first = true;
  for (double alpha : alphas) {
    for (double beta : betas) {
      const DecodeParams params{alpha, beta};
      std::size_t correct = 0;
      for (std::size_t i = 0; i < items.size(); ++i) {
        const ScoredWord* best = nullptr;
        ScoredWord candidate;
        ScoredWord chosen;
        for (std::size_t e = 0; e < dict.size(); ++e) {
          for (std::size_t member = 0; member < nlp[i].size(); ++member) {
            candidate = {dict[e].word,
                         cost_from_nlp(nlp[i][member][e], dict[e].labels.size(),
                                       dict.log_prior(e), params),
                         static_cast<int>(member), e};
            if (!std::isfinite(candidate.cost)) continue;
            if (best == nullptr || better(candidate, chosen)) {
              chosen = candidate;
              best = &chosen;
            }
          }
        }
        if (best != nullptr && chosen.word == items[i].reference) ++correct;
      }
      const double acc = static_cast<double>(correct) / static_cast<double>(items.size());
      result.table.push_back({params, acc});
      if (first || acc > result.accuracy) {
        result.best = params;
        result.accuracy = acc;
        first = false;
      }
    }
  }
  return result;
}

}  // namespace tablereader::decode
