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

#include "tablereader/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tablereader/ctc.hpp"

namespace tablereader {

GradCheckReport gradient_check(const Network& net, WeightStore weights, const Raster& input,
                               const LabelSequence& labels, const GradCheckOptions& options) {
  ForwardTrace trace;
  const OutputMatrix m = net.forward(weights, input, &trace, Execution::kSerial);
  const ctc::CtcResult ctc_result = ctc::gradient(m, labels);
  if (!ctc_result.feasible) throw Error("gradient_check: labels infeasible for this input");
  const Gradients analytic =
      net.backward(weights, trace, ctc_result.grad_logits, Execution::kSerial);

  auto loss = [&]() {
    return ctc::neg_log_prob(net.forward(weights, input, nullptr, Execution::kSerial), labels);
  };

  // Round-robin over layers so small layers are represented too.
  std::mt19937_64 rng(options.seed);
  GradCheckReport report;
  report.loss = ctc_result.neg_log_prob;
  const std::size_t layers = weights.layers.size();
  int passed = 0;
  for (int i = 0; i < options.samples; ++i) {
    const std::size_t l = static_cast<std::size_t>(i) % layers;
    auto& values = weights.layers[l].values;
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    const std::size_t idx = pick(rng);
    const double saved = values[idx];
    values[idx] = saved + options.step;
    const double up = loss();
    values[idx] = saved - options.step;
    const double down = loss();
    values[idx] = saved;

    GradCheckSample s;
    s.layer = l;
    s.index = idx;
    s.analytic = analytic[l][idx];
    s.numeric = (up - down) / (2.0 * options.step);
    s.relative_error = std::abs(s.analytic - s.numeric) / std::max(1.0, std::abs(s.numeric));
    report.max_relative_error = std::max(report.max_relative_error, s.relative_error);
    if (s.relative_error < options.tolerance) ++passed;
    report.samples.push_back(s);
  }
  report.pass_fraction =
      options.samples > 0 ? static_cast<double>(passed) / options.samples : 1.0;
  return report;
}

}  // namespace tablereader
