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

#include <cstddef>
#include <vector>

namespace tablereader {

// T x K real matrix stored time-major: value(t, k) at data[t * K + k].
struct ColumnMatrix {
  int timesteps = 0;
  int classes = 0;
  std::vector<double> data;

  ColumnMatrix() = default;
  ColumnMatrix(int t, int k, double fill = 0.0)
      : timesteps(t), classes(k), data(static_cast<std::size_t>(t) * k, fill) {}

  double& at(int t, int k) { return data[static_cast<std::size_t>(t) * classes + k]; }
  double at(int t, int k) const { return data[static_cast<std::size_t>(t) * classes + k]; }
  bool operator==(const ColumnMatrix&) const = default;
};

// Per-timestep class posteriors of one writing. Log-probabilities are kept
// alongside so CTC never takes the log of an underflowed probability.
class OutputMatrix {
 public:
  OutputMatrix() = default;

  // Validates that every column is a distribution (sums to 1 within 1e-9,
  // entries in (0, 1]).
  static OutputMatrix from_probabilities(ColumnMatrix probs);

  int timesteps() const { return probs_.timesteps; }
  int classes() const { return probs_.classes; }
  double prob(int t, int k) const { return probs_.at(t, k); }
  double log_prob(int t, int k) const { return log_probs_.at(t, k); }
  const ColumnMatrix& probs() const { return probs_; }
  const ColumnMatrix& log_probs() const { return log_probs_; }

  bool operator==(const OutputMatrix&) const = default;

 private:
  friend OutputMatrix softmax_columns(const ColumnMatrix& logits);
  ColumnMatrix probs_;
  ColumnMatrix log_probs_;
};

// Max-shifted softmax of every column.
OutputMatrix softmax_columns(const ColumnMatrix& logits);

// Pulls a gradient with respect to probabilities back to the logits.
ColumnMatrix softmax_backward(const OutputMatrix& m, const ColumnMatrix& grad_probs);

}  // namespace tablereader
