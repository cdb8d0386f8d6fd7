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

#include "tablereader/gabor.hpp"

#include <cmath>
#include <numbers>

namespace tablereader {

std::vector<Kernel> make_gabor_kernels(const GaborBank& bank) {
  if (bank.kernel_size < 1 || bank.kernel_size % 2 == 0)
    throw Error("Gabor kernel size must be odd and >= 1");
  if (bank.wavelength <= 0.0 || bank.sigma <= 0.0)
    throw Error("Gabor wavelength and sigma must be positive");
  const int r = bank.kernel_size / 2;
  std::vector<Kernel> kernels;
  for (double deg : bank.orientations_deg) {
    const double theta = deg * std::numbers::pi / 180.0;
    Kernel k{bank.kernel_size, std::vector<double>(bank.kernel_size * bank.kernel_size)};
    double mean = 0.0;
    for (int j = -r; j <= r; ++j) {
      for (int i = -r; i <= r; ++i) {
        const double xr = i * std::cos(theta) + j * std::sin(theta);
        const double envelope = std::exp(-(i * i + j * j) / (2.0 * bank.sigma * bank.sigma));
        const double v = envelope * std::cos(2.0 * std::numbers::pi * xr / bank.wavelength);
        k.values[(j + r) * k.size + (i + r)] = v;
        mean += v;
      }
    }
    mean /= k.values.size();
    double norm = 0.0;
    for (double& v : k.values) {
      v -= mean;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : k.values) v /= norm;
    kernels.push_back(std::move(k));
  }
  return kernels;
}

void correlate_same(const FeatureGrid& input, int in_channel, const Kernel& kernel,
                    FeatureGrid& output, int out_channel, Execution exec) {
  const int w = input.width();
  const int h = input.height();
  const int r = kernel.size / 2;
  auto row = [&](int y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -r; j <= r; ++j) {
        const int sy = y + j;
        if (sy < 0 || sy >= h) continue;
        for (int i = -r; i <= r; ++i) {
          const int sx = x + i;
          if (sx < 0 || sx >= w) continue;
          acc += kernel.at(i + r, j + r) * input.at(sx, sy, in_channel);
        }
      }
      output.at(x, y, out_channel) = acc;
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) row(y);
  } else {
    for (int y = 0; y < h; ++y) row(y);
  }
}

FeatureGrid centered_ink(const Raster& raster) {
  FeatureGrid grid(raster.width(), raster.height(), 1);
  double mean = 0.0;
  for (int y = 0; y < raster.height(); ++y)
    for (int x = 0; x < raster.width(); ++x) {
      const double ink = (255.0 - raster.at(x, y)) / 255.0;
      grid.at(x, y, 0) = ink;
      mean += ink;
    }
  mean /= static_cast<double>(grid.size());
  for (double& v : grid.values()) v -= mean;
  return grid;
}

FeatureGrid gabor_forward(const Raster& raster, const std::vector<Kernel>& kernels,
                          Execution exec) {
  const FeatureGrid ink = centered_ink(raster);
  FeatureGrid out(raster.width(), raster.height(), static_cast<int>(kernels.size()));
  for (std::size_t c = 0; c < kernels.size(); ++c)
    correlate_same(ink, 0, kernels[c], out, static_cast<int>(c), exec);
  return out;
}

FeatureGrid gabor_forward(const Raster& raster, const GaborBank& bank, Execution exec) {
  return gabor_forward(raster, make_gabor_kernels(bank), exec);
}

}  // namespace tablereader
