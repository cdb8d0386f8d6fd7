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

#include <limits>

#include "tablereader/alphabet.hpp"
#include "tablereader/output_matrix.hpp"

namespace tablereader::ctc {

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) with -inf as the additive identity.
double log_add(double a, double b);

// (blank, l1, blank, l2, ..., lL, blank).
LabelSequence interleave_blanks(const LabelSequence& labels, int blank);

// Minimum number of frames needed to emit `labels`: one per label plus one
// separating blank for every adjacent repeat.
int min_frames(const LabelSequence& labels);

// Throws unless every label is a task symbol of a K-class matrix whose last
// class is the blank, and the sequence is non-empty.
void check_labels(const LabelSequence& labels, int classes);

// -ln p(labels | m), summed over every frame path that collapses to
// `labels`. The blank is the matrix's last class. Returns kInfeasible when
// the matrix has too few frames.
double neg_log_prob(const OutputMatrix& m, const LabelSequence& labels);

struct CtcResult {
  double neg_log_prob = kInfeasible;
  bool feasible = false;
  // d(-ln p) / d(logit) for every (t, k); all zero when infeasible.
  ColumnMatrix grad_logits;
};

// Forward-backward. The gradient is taken with respect to the pre-softmax
// logits from which `m` was computed.
CtcResult gradient(const OutputMatrix& m, const LabelSequence& labels);

}  // namespace tablereader::ctc
