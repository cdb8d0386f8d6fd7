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

// Independent reference computations used only by the tests. Nothing here
// shares code with the production CTC or decoding paths.

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "tablereader/output_matrix.hpp"

namespace oracle {

// Removes repeats, then the blank.
inline std::vector<int> collapse_path(const std::vector<int>& path, int blank) {
  std::vector<int> out;
  int prev = -1;
  for (int k : path) {
    if (k != prev && k != blank) out.push_back(k);
    prev = k;
  }
  return out;
}

// Probability of every collapsed label sequence, by enumerating all K^T
// frame paths of the matrix. Blank is the last class.
inline std::map<std::vector<int>, double> path_sums(const tablereader::OutputMatrix& m) {
  const int T = m.timesteps();
  const int K = m.classes();
  std::map<std::vector<int>, double> sums;
  std::vector<int> path(T, 0);
  while (true) {
    double p = 1.0;
    for (int t = 0; t < T; ++t) p *= m.prob(t, path[t]);
    sums[collapse_path(path, K - 1)] += p;
    int t = T - 1;
    while (t >= 0 && ++path[t] == K) path[t--] = 0;
    if (t < 0) break;
  }
  return sums;
}

inline double brute_force_prob(const tablereader::OutputMatrix& m,
                               const std::vector<int>& labels) {
  auto sums = path_sums(m);
  auto it = sums.find(labels);
  return it == sums.end() ? 0.0 : it->second;
}

// Column-normalized matrix with entries drawn from (0.05, 1).
inline tablereader::OutputMatrix random_matrix(int T, int K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  tablereader::ColumnMatrix probs(T, K);
  for (int t = 0; t < T; ++t) {
    double sum = 0.0;
    for (int k = 0; k < K; ++k) sum += probs.at(t, k) = dist(rng);
    for (int k = 0; k < K; ++k) probs.at(t, k) /= sum;
  }
  return tablereader::OutputMatrix::from_probabilities(std::move(probs));
}

inline tablereader::ColumnMatrix random_logits(int T, int K, std::mt19937_64& rng,
                                               double scale = 2.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  tablereader::ColumnMatrix z(T, K);
  for (double& v : z.data) v = dist(rng);
  return z;
}

}  // namespace oracle
