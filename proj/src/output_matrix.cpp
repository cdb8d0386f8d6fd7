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

#include "tablereader/output_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "tablereader/common.hpp"

namespace tablereader {

OutputMatrix OutputMatrix::from_probabilities(ColumnMatrix probs) {
  for (int t = 0; t < probs.timesteps; ++t) {
    double sum = 0.0;
    for (int k = 0; k < probs.classes; ++k) {
      const double p = probs.at(t, k);
      if (!(p > 0.0 && p <= 1.0))
        throw NumericError("output matrix entry outside (0, 1] at t=" + std::to_string(t));
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw NumericError("output matrix column " + std::to_string(t) + " does not sum to 1");
  }
  OutputMatrix m;
  m.log_probs_ = probs;
  for (double& v : m.log_probs_.data) v = std::log(v);
  m.probs_ = std::move(probs);
  return m;
}

OutputMatrix softmax_columns(const ColumnMatrix& logits) {
  OutputMatrix m;
  m.probs_ = ColumnMatrix(logits.timesteps, logits.classes);
  m.log_probs_ = ColumnMatrix(logits.timesteps, logits.classes);
  for (int t = 0; t < logits.timesteps; ++t) {
    double top = logits.at(t, 0);
    for (int k = 1; k < logits.classes; ++k) top = std::max(top, logits.at(t, k));
    double sum = 0.0;
    for (int k = 0; k < logits.classes; ++k) sum += std::exp(logits.at(t, k) - top);
    const double log_sum = std::log(sum);
    for (int k = 0; k < logits.classes; ++k) {
      const double lp = logits.at(t, k) - top - log_sum;
      m.log_probs_.at(t, k) = lp;
      m.probs_.at(t, k) = std::exp(lp);
    }
  }
  return m;
}

ColumnMatrix softmax_backward(const OutputMatrix& m, const ColumnMatrix& grad_probs) {
  ColumnMatrix out(m.timesteps(), m.classes());
  for (int t = 0; t < m.timesteps(); ++t) {
    double dot = 0.0;
    for (int k = 0; k < m.classes(); ++k) dot += m.prob(t, k) * grad_probs.at(t, k);
    for (int k = 0; k < m.classes(); ++k)
      out.at(t, k) = m.prob(t, k) * (grad_probs.at(t, k) - dot);
  }
  return out;
}

}  // namespace tablereader
