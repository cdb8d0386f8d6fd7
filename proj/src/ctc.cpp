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

#include "tablereader/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tablereader/common.hpp"

namespace tablereader::ctc {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Log-space lattice over the extended label sequence, [t][s].
struct Lattice {
  int frames = 0;
  int states = 0;
  std::vector<double> v;
  Lattice(int t, int s) : frames(t), states(s), v(static_cast<std::size_t>(t) * s, kLogZero) {}
  double& at(int t, int s) { return v[static_cast<std::size_t>(t) * states + s]; }
  double at(int t, int s) const { return v[static_cast<std::size_t>(t) * states + s]; }
};

// A state may be skipped (s-2 -> s) when it is a label differing from the
// label two positions back.
bool can_skip(const LabelSequence& ext, int s, int blank) {
  return s >= 2 && ext[s] != blank && ext[s] != ext[s - 2];
}

Lattice forward_pass(const OutputMatrix& m, const LabelSequence& ext, int blank) {
  const int T = m.timesteps();
  const int S = static_cast<int>(ext.size());
  Lattice alpha(T, S);
  alpha.at(0, 0) = m.log_prob(0, ext[0]);
  if (S > 1) alpha.at(0, 1) = m.log_prob(0, ext[1]);
  for (int t = 1; t < T; ++t) {
    // States that can still reach the end in the remaining frames.
    const int lo = std::max(0, S - 2 * (T - t));
    const int hi = std::min(S, 2 * (t + 1));
    for (int s = lo; s < hi; ++s) {
      double a = alpha.at(t - 1, s);
      if (s >= 1) a = log_add(a, alpha.at(t - 1, s - 1));
      if (can_skip(ext, s, blank)) a = log_add(a, alpha.at(t - 1, s - 2));
      alpha.at(t, s) = a == kLogZero ? kLogZero : a + m.log_prob(t, ext[s]);
    }
  }
  return alpha;
}

Lattice backward_pass(const OutputMatrix& m, const LabelSequence& ext, int blank) {
  const int T = m.timesteps();
  const int S = static_cast<int>(ext.size());
  Lattice beta(T, S);
  beta.at(T - 1, S - 1) = m.log_prob(T - 1, ext[S - 1]);
  if (S > 1) beta.at(T - 1, S - 2) = m.log_prob(T - 1, ext[S - 2]);
  for (int t = T - 2; t >= 0; --t) {
    const int lo = std::max(0, S - 2 * (T - t));
    const int hi = std::min(S, 2 * (t + 1));
    for (int s = lo; s < hi; ++s) {
      double b = beta.at(t + 1, s);
      if (s + 1 < S) b = log_add(b, beta.at(t + 1, s + 1));
      if (s + 2 < S && can_skip(ext, s + 2, blank)) b = log_add(b, beta.at(t + 1, s + 2));
      beta.at(t, s) = b == kLogZero ? kLogZero : b + m.log_prob(t, ext[s]);
    }
  }
  return beta;
}

double total_log_prob(const Lattice& alpha) {
  const int T = alpha.frames;
  const int S = alpha.states;
  double p = alpha.at(T - 1, S - 1);
  if (S > 1) p = log_add(p, alpha.at(T - 1, S - 2));
  return p;
}

}  // namespace

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

LabelSequence interleave_blanks(const LabelSequence& labels, int blank) {
  LabelSequence ext;
  ext.reserve(2 * labels.size() + 1);
  ext.push_back(blank);
  for (int l : labels) {
    ext.push_back(l);
    ext.push_back(blank);
  }
  return ext;
}

int min_frames(const LabelSequence& labels) {
  int n = static_cast<int>(labels.size());
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) ++n;
  return n;
}

void check_labels(const LabelSequence& labels, int classes) {
  if (labels.empty()) throw Error("CTC: label sequence must be non-empty");
  for (int l : labels)
    if (l < 0 || l >= classes - 1)
      throw Error("CTC: label " + std::to_string(l) + " is not a task symbol of a " +
                  std::to_string(classes) + "-class output");
}

double neg_log_prob(const OutputMatrix& m, const LabelSequence& labels) {
  check_labels(labels, m.classes());
  if (m.timesteps() < min_frames(labels)) return kInfeasible;
  const int blank = m.classes() - 1;
  const LabelSequence ext = interleave_blanks(labels, blank);
  const double lp = total_log_prob(forward_pass(m, ext, blank));
  return lp == kLogZero ? kInfeasible : -lp;
}

CtcResult gradient(const OutputMatrix& m, const LabelSequence& labels) {
  check_labels(labels, m.classes());
  CtcResult result;
  result.grad_logits = ColumnMatrix(m.timesteps(), m.classes());
  if (m.timesteps() < min_frames(labels)) return result;

  const int blank = m.classes() - 1;
  const LabelSequence ext = interleave_blanks(labels, blank);
  const Lattice alpha = forward_pass(m, ext, blank);
  const Lattice beta = backward_pass(m, ext, blank);
  const double log_p = total_log_prob(alpha);
  if (log_p == kLogZero) return result;
  result.feasible = true;
  result.neg_log_prob = -log_p;

  // alpha_t(s) * beta_t(s) counts y_t(ext[s]) twice, hence the division.
  const int S = static_cast<int>(ext.size());
  std::vector<double> occupation(m.classes());
  for (int t = 0; t < m.timesteps(); ++t) {
    std::fill(occupation.begin(), occupation.end(), kLogZero);
    for (int s = 0; s < S; ++s) {
      const double ab = alpha.at(t, s) + beta.at(t, s);
      if (std::isinf(ab)) continue;
      occupation[ext[s]] = log_add(occupation[ext[s]], ab);
    }
    for (int k = 0; k < m.classes(); ++k) {
      const double posterior =
          occupation[k] == kLogZero ? 0.0
                                    : std::exp(occupation[k] - m.log_prob(t, k) - log_p);
      result.grad_logits.at(t, k) = m.prob(t, k) - posterior;
    }
  }
  return result;
}

}  // namespace tablereader::ctc
