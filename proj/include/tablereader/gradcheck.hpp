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

#include <cstdint>
#include <string>
#include <vector>

#include "tablereader/network.hpp"

namespace tablereader {

struct GradCheckSample {
  std::size_t layer = 0;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  // |analytic - numeric| / max(1, |numeric|)
  double relative_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckSample> samples;
  double max_relative_error = 0.0;
  double pass_fraction = 0.0;  // share of samples below the tolerance
  double loss = 0.0;
};

struct GradCheckOptions {
  int samples = 200;
  double step = 1e-5;
  double tolerance = 1e-4;
  std::uint64_t seed = 7;
};

// Compares backprop through the network and CTC against central differences
// of the CTC loss, on parameters sampled evenly across all trainable layers.
GradCheckReport gradient_check(const Network& net, WeightStore weights, const Raster& input,
                               const LabelSequence& labels, const GradCheckOptions& options = {});

}  // namespace tablereader
