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

#include <vector>

#include "tablereader/grid.hpp"
#include "tablereader/parallel.hpp"
#include "tablereader/raster.hpp"

namespace tablereader {

struct GaborBank {
  std::vector<double> orientations_deg{0.0, 45.0, 90.0, 135.0};
  double wavelength = 8.0;
  double sigma = 4.0;
  int kernel_size = 11;

  bool operator==(const GaborBank&) const = default;
};

// Square kernel, row-major, side = kernel_size.
struct Kernel {
  int size = 0;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * size + i]; }
};

// Real (cosine) Gabor kernels, one per orientation. An orientation of 0
// degrees modulates along x, i.e. it responds to vertical strokes. Each
// kernel is shifted to zero mean and scaled to unit L2 norm.
std::vector<Kernel> make_gabor_kernels(const GaborBank& bank);

// Zero-padded cross-correlation of every channel of `input` with `kernel`,
// writing into output channel `out_channel`. An impulse therefore reproduces
// the kernel rotated by 180 degrees.
void correlate_same(const FeatureGrid& input, int in_channel, const Kernel& kernel,
                    FeatureGrid& output, int out_channel,
                    Execution exec = Execution::kParallel);

// Ink image ((255 - gray) / 255) minus its mean, as a one-channel grid.
FeatureGrid centered_ink(const Raster& raster);

// Fixed, non-trainable front end: one output channel per orientation.
FeatureGrid gabor_forward(const Raster& raster, const GaborBank& bank,
                          Execution exec = Execution::kParallel);
FeatureGrid gabor_forward(const Raster& raster, const std::vector<Kernel>& kernels,
                          Execution exec = Execution::kParallel);

}  // namespace tablereader
