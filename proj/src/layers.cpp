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

#include "tablereader/layers.hpp"

#include <cmath>

namespace tablereader {

void Layer::initialize(std::span<double> params, std::mt19937_64& rng, double scale) const {
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (double& p : params) p = dist(rng);
}

namespace {

void check_params(std::span<const double> params, std::size_t expected, const char* who) {
  if (params.size() != expected)
    throw Error(std::string(who) + ": expected " + std::to_string(expected) +
                " parameters, got " + std::to_string(params.size()));
}

void check_channels(const FeatureGrid& input, int expected, const char* who) {
  if (input.channels() != expected)
    throw Error(std::string(who) + ": expected " + std::to_string(expected) +
                " input channels, got " + std::to_string(input.channels()));
}

}  // namespace

// ---------------------------------------------------------------- subsample

SubsampleLayer::SubsampleLayer(int in_channels, int units, int fy, int fx)
    : in_channels_(in_channels), units_(units), fy_(fy), fx_(fx) {
  if (fy < 1 || fx < 1) throw Error("subsample factors must be >= 1");
  if (in_channels < 1 || units < 1) throw Error("subsample layer needs channels and units");
}

std::size_t SubsampleLayer::parameter_count() const {
  return static_cast<std::size_t>(units_) * (fy_ * fx_ * in_channels_ + 1);
}

FeatureGrid SubsampleLayer::forward(std::span<const double> params, const FeatureGrid& input,
                                    std::unique_ptr<LayerCache>&, Execution exec) const {
  check_params(params, parameter_count(), "subsample");
  check_channels(input, in_channels_, "subsample");
  const int ow = output_width(input.width());
  const int oh = output_height(input.height());
  const int fan_in = fy_ * fx_ * in_channels_;
  const double* bias = params.data() + static_cast<std::size_t>(units_) * fan_in;
  FeatureGrid out(ow, oh, units_);

  auto column = [&](int ox) {
    for (int oy = 0; oy < oh; ++oy) {
      auto dst = out.cell(ox, oy);
      for (int u = 0; u < units_; ++u) {
        const double* w = params.data() + static_cast<std::size_t>(u) * fan_in;
        double acc = bias[u];
        for (int dy = 0; dy < fy_; ++dy) {
          const int y = oy * fy_ + dy;
          if (y >= input.height()) break;
          for (int dx = 0; dx < fx_; ++dx) {
            const int x = ox * fx_ + dx;
            if (x >= input.width()) break;
            auto src = input.cell(x, y);
            const double* wb = w + (dy * fx_ + dx) * in_channels_;
            for (int c = 0; c < in_channels_; ++c) acc += wb[c] * src[c];
          }
        }
        dst[u] = std::tanh(acc);
      }
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int ox = 0; ox < ow; ++ox) column(ox);
  } else {
    for (int ox = 0; ox < ow; ++ox) column(ox);
  }
  return out;
}

FeatureGrid SubsampleLayer::backward(std::span<const double> params, const FeatureGrid& input,
                                     const FeatureGrid& output, const LayerCache*,
                                     const FeatureGrid& grad_output,
                                     std::span<double> grad_params, Execution) const {
  const int fan_in = fy_ * fx_ * in_channels_;
  double* gbias = grad_params.data() + static_cast<std::size_t>(units_) * fan_in;
  FeatureGrid grad_in(input.width(), input.height(), in_channels_);
  for (int oy = 0; oy < output.height(); ++oy) {
    for (int ox = 0; ox < output.width(); ++ox) {
      auto out = output.cell(ox, oy);
      auto gout = grad_output.cell(ox, oy);
      for (int u = 0; u < units_; ++u) {
        const double dz = gout[u] * (1.0 - out[u] * out[u]);
        if (dz == 0.0) continue;
        gbias[u] += dz;
        const double* w = params.data() + static_cast<std::size_t>(u) * fan_in;
        double* gw = grad_params.data() + static_cast<std::size_t>(u) * fan_in;
        for (int dy = 0; dy < fy_; ++dy) {
          const int y = oy * fy_ + dy;
          if (y >= input.height()) break;
          for (int dx = 0; dx < fx_; ++dx) {
            const int x = ox * fx_ + dx;
            if (x >= input.width()) break;
            auto src = input.cell(x, y);
            auto gsrc = grad_in.cell(x, y);
            const int off = (dy * fx_ + dx) * in_channels_;
            for (int c = 0; c < in_channels_; ++c) {
              gw[off + c] += dz * src[c];
              gsrc[c] += dz * w[off + c];
            }
          }
        }
      }
    }
  }
  return grad_in;
}

FeatureGrid subsample(const FeatureGrid& grid, int fy, int fx, int units,
                      std::span<const double> params) {
  SubsampleLayer layer(grid.channels(), units, fy, fx);
  std::unique_ptr<LayerCache> cache;
  return layer.forward(params, grid, cache, Execution::kSerial);
}

// --------------------------------------------------------------------- tanh

TanhLayer::TanhLayer(int in_channels, int units) : in_channels_(in_channels), units_(units) {
  if (in_channels < 1 || units < 1) throw Error("tanh layer needs channels and units");
}

std::size_t TanhLayer::parameter_count() const {
  return static_cast<std::size_t>(units_) * (in_channels_ + 1);
}

FeatureGrid TanhLayer::forward(std::span<const double> params, const FeatureGrid& input,
                               std::unique_ptr<LayerCache>&, Execution exec) const {
  check_params(params, parameter_count(), "tanh");
  check_channels(input, in_channels_, "tanh");
  const double* bias = params.data() + static_cast<std::size_t>(units_) * in_channels_;
  FeatureGrid out(input.width(), input.height(), units_);
  const int cells = input.width() * input.height();
  auto one = [&](int i) {
    const int x = i % input.width();
    const int y = i / input.width();
    auto src = input.cell(x, y);
    auto dst = out.cell(x, y);
    for (int u = 0; u < units_; ++u) {
      const double* w = params.data() + static_cast<std::size_t>(u) * in_channels_;
      double acc = bias[u];
      for (int c = 0; c < in_channels_; ++c) acc += w[c] * src[c];
      dst[u] = std::tanh(acc);
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < cells; ++i) one(i);
  } else {
    for (int i = 0; i < cells; ++i) one(i);
  }
  return out;
}

FeatureGrid TanhLayer::backward(std::span<const double> params, const FeatureGrid& input,
                                const FeatureGrid& output, const LayerCache*,
                                const FeatureGrid& grad_output, std::span<double> grad_params,
                                Execution) const {
  double* gbias = grad_params.data() + static_cast<std::size_t>(units_) * in_channels_;
  FeatureGrid grad_in(input.width(), input.height(), in_channels_);
  for (int y = 0; y < input.height(); ++y) {
    for (int x = 0; x < input.width(); ++x) {
      auto src = input.cell(x, y);
      auto out = output.cell(x, y);
      auto gout = grad_output.cell(x, y);
      auto gsrc = grad_in.cell(x, y);
      for (int u = 0; u < units_; ++u) {
        const double dz = gout[u] * (1.0 - out[u] * out[u]);
        if (dz == 0.0) continue;
        gbias[u] += dz;
        const double* w = params.data() + static_cast<std::size_t>(u) * in_channels_;
        double* gw = grad_params.data() + static_cast<std::size_t>(u) * in_channels_;
        for (int c = 0; c < in_channels_; ++c) {
          gw[c] += dz * src[c];
          gsrc[c] += dz * w[c];
        }
      }
    }
  }
  return grad_in;
}

// ----------------------------------------------------------------- collapse

FeatureGrid collapse_columns(const FeatureGrid& grid) {
  FeatureGrid out(grid.width(), 1, grid.channels());
  for (int x = 0; x < grid.width(); ++x) {
    auto dst = out.cell(x, 0);
    for (int y = 0; y < grid.height(); ++y) {
      auto src = grid.cell(x, y);
      for (int c = 0; c < grid.channels(); ++c) dst[c] += src[c];
    }
  }
  return out;
}

FeatureGrid CollapseLayer::forward(std::span<const double>, const FeatureGrid& input,
                                   std::unique_ptr<LayerCache>&, Execution) const {
  return collapse_columns(input);
}

FeatureGrid CollapseLayer::backward(std::span<const double>, const FeatureGrid& input,
                                    const FeatureGrid&, const LayerCache*,
                                    const FeatureGrid& grad_output, std::span<double>,
                                    Execution) const {
  FeatureGrid grad_in(input.width(), input.height(), input.channels());
  for (int y = 0; y < input.height(); ++y)
    for (int x = 0; x < input.width(); ++x) {
      auto g = grad_output.cell(x, 0);
      auto dst = grad_in.cell(x, y);
      std::copy(g.begin(), g.end(), dst.begin());
    }
  return grad_in;
}

FeatureGrid direction_merge(std::span<const FeatureGrid> directional) {
  if (directional.empty()) throw Error("direction_merge: no inputs");
  FeatureGrid out = directional.front();
  for (std::size_t d = 1; d < directional.size(); ++d) {
    if (!directional[d].same_shape(out)) throw Error("direction_merge: shape mismatch");
    const auto& src = directional[d].values();
    auto& dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return out;
}

// ------------------------------------------------------------------- output

OutputLayer::OutputLayer(int in_channels, int classes)
    : in_channels_(in_channels), classes_(classes) {
  if (in_channels < 1 || classes < 2) throw Error("output layer needs channels and >= 2 classes");
}

std::size_t OutputLayer::parameter_count() const {
  return static_cast<std::size_t>(classes_) * (in_channels_ + 1);
}

FeatureGrid OutputLayer::forward(std::span<const double> params, const FeatureGrid& input,
                                 std::unique_ptr<LayerCache>&, Execution) const {
  check_params(params, parameter_count(), "softmax");
  check_channels(input, in_channels_, "softmax");
  const double* bias = params.data() + static_cast<std::size_t>(classes_) * in_channels_;
  FeatureGrid out(input.width(), input.height(), classes_);
  for (int y = 0; y < input.height(); ++y)
    for (int x = 0; x < input.width(); ++x) {
      auto src = input.cell(x, y);
      auto dst = out.cell(x, y);
      for (int k = 0; k < classes_; ++k) {
        const double* w = params.data() + static_cast<std::size_t>(k) * in_channels_;
        double acc = bias[k];
        for (int c = 0; c < in_channels_; ++c) acc += w[c] * src[c];
        dst[k] = acc;
      }
    }
  return out;
}

FeatureGrid OutputLayer::backward(std::span<const double> params, const FeatureGrid& input,
                                  const FeatureGrid&, const LayerCache*,
                                  const FeatureGrid& grad_output, std::span<double> grad_params,
                                  Execution) const {
  double* gbias = grad_params.data() + static_cast<std::size_t>(classes_) * in_channels_;
  FeatureGrid grad_in(input.width(), input.height(), in_channels_);
  for (int y = 0; y < input.height(); ++y)
    for (int x = 0; x < input.width(); ++x) {
      auto src = input.cell(x, y);
      auto gout = grad_output.cell(x, y);
      auto gsrc = grad_in.cell(x, y);
      for (int k = 0; k < classes_; ++k) {
        const double dz = gout[k];
        if (dz == 0.0) continue;
        gbias[k] += dz;
        const double* w = params.data() + static_cast<std::size_t>(k) * in_channels_;
        double* gw = grad_params.data() + static_cast<std::size_t>(k) * in_channels_;
        for (int c = 0; c < in_channels_; ++c) {
          gw[c] += dz * src[c];
          gsrc[c] += dz * w[c];
        }
      }
    }
  return grad_in;
}

}  // namespace tablereader
