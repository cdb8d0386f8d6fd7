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

#include <memory>
#include <random>
#include <span>
#include <string>

#include "tablereader/grid.hpp"
#include "tablereader/parallel.hpp"

namespace tablereader {

// Per-call scratch a layer needs between forward and backward.
struct LayerCache {
  virtual ~LayerCache() = default;
};

// One trainable stage of the network. Layers are immutable once built:
// parameters live in a WeightStore and are passed in, so one layer object can
// serve many concurrent evaluations.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t parameter_count() const = 0;
  // Neuron count in the sense of the architecture tables; recurrent layers
  // count each scan direction separately.
  virtual int cell_count() const = 0;
  virtual int output_channels() const = 0;
  // Inputs feeding one unit; sets the initialization scale.
  virtual int fan_in() const { return 1; }
  virtual int output_width(int input_width) const { return input_width; }
  virtual int output_height(int input_height) const { return input_height; }

  virtual FeatureGrid forward(std::span<const double> params, const FeatureGrid& input,
                              std::unique_ptr<LayerCache>& cache, Execution exec) const = 0;

  // Accumulates parameter gradients into grad_params and returns the
  // gradient with respect to `input`.
  virtual FeatureGrid backward(std::span<const double> params, const FeatureGrid& input,
                               const FeatureGrid& output, const LayerCache* cache,
                               const FeatureGrid& grad_output, std::span<double> grad_params,
                               Execution exec) const = 0;

  // Uniform in [-scale, scale].
  virtual void initialize(std::span<double> params, std::mt19937_64& rng,
                          double scale) const;
};

// Non-overlapping fy x fx blocks, zero padded at the far borders, are
// concatenated channel-wise and mapped through a trainable affine map and tanh.
// Parameter layout: weights[units][fy][fx][in_channels], then bias[units].
class SubsampleLayer final : public Layer {
 public:
  SubsampleLayer(int in_channels, int units, int fy, int fx);
  std::string kind() const override { return "subsample"; }
  std::size_t parameter_count() const override;
  int cell_count() const override { return units_; }
  int output_channels() const override { return units_; }
  int fan_in() const override { return fy_ * fx_ * in_channels_; }
  int output_width(int w) const override { return (w + fx_ - 1) / fx_; }
  int output_height(int h) const override { return (h + fy_ - 1) / fy_; }
  FeatureGrid forward(std::span<const double> params, const FeatureGrid& input,
                      std::unique_ptr<LayerCache>& cache, Execution exec) const override;
  FeatureGrid backward(std::span<const double> params, const FeatureGrid& input,
                       const FeatureGrid& output, const LayerCache* cache,
                       const FeatureGrid& grad_output, std::span<double> grad_params,
                       Execution exec) const override;

 private:
  int in_channels_, units_, fy_, fx_;
};

// Position-wise tanh units: weights[units][in_channels], bias[units].
class TanhLayer final : public Layer {
 public:
  TanhLayer(int in_channels, int units);
  std::string kind() const override { return "tanh"; }
  std::size_t parameter_count() const override;
  int cell_count() const override { return units_; }
  int output_channels() const override { return units_; }
  int fan_in() const override { return in_channels_; }
  FeatureGrid forward(std::span<const double> params, const FeatureGrid& input,
                      std::unique_ptr<LayerCache>& cache, Execution exec) const override;
  FeatureGrid backward(std::span<const double> params, const FeatureGrid& input,
                       const FeatureGrid& output, const LayerCache* cache,
                       const FeatureGrid& grad_output, std::span<double> grad_params,
                       Execution exec) const override;

 private:
  int in_channels_, units_;
};

// Sums every column over its rows: height becomes 1.
class CollapseLayer final : public Layer {
 public:
  explicit CollapseLayer(int channels) : channels_(channels) {}
  std::string kind() const override { return "collapse"; }
  std::size_t parameter_count() const override { return 0; }
  int cell_count() const override { return 0; }
  int output_channels() const override { return channels_; }
  int output_height(int) const override { return 1; }
  FeatureGrid forward(std::span<const double> params, const FeatureGrid& input,
                      std::unique_ptr<LayerCache>& cache, Execution exec) const override;
  FeatureGrid backward(std::span<const double> params, const FeatureGrid& input,
                       const FeatureGrid& output, const LayerCache* cache,
                       const FeatureGrid& grad_output, std::span<double> grad_params,
                       Execution exec) const override;

 private:
  int channels_;
};

// Affine map from the collapsed column activations to one logit per
// alphabet symbol: weights[classes][in_channels], bias[classes]. The softmax
// itself is applied by the network (softmax_columns).
class OutputLayer final : public Layer {
 public:
  OutputLayer(int in_channels, int classes);
  std::string kind() const override { return "softmax"; }
  std::size_t parameter_count() const override;
  int cell_count() const override { return classes_; }
  int output_channels() const override { return classes_; }
  int fan_in() const override { return in_channels_; }
  FeatureGrid forward(std::span<const double> params, const FeatureGrid& input,
                      std::unique_ptr<LayerCache>& cache, Execution exec) const override;
  FeatureGrid backward(std::span<const double> params, const FeatureGrid& input,
                       const FeatureGrid& output, const LayerCache* cache,
                       const FeatureGrid& grad_output, std::span<double> grad_params,
                       Execution exec) const override;

 private:
  int in_channels_, classes_;
};

// Free-function forms of single stages.
FeatureGrid subsample(const FeatureGrid& grid, int fy, int fx, int units,
                      std::span<const double> params);
FeatureGrid collapse_columns(const FeatureGrid& grid);
FeatureGrid direction_merge(std::span<const FeatureGrid> directional);

}  // namespace tablereader
