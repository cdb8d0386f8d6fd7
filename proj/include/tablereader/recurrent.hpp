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

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "tablereader/layers.hpp"

namespace tablereader {

struct ScanDirection {
  bool bottom_up = false;
  bool right_to_left = false;
  bool operator==(const ScanDirection&) const = default;
};

// (top-down, LR), (bottom-up, LR), (top-down, RL), (bottom-up, RL).
inline constexpr std::array<ScanDirection, 4> kScanDirections{{
    {false, false}, {true, false}, {false, true}, {true, true}}};

struct GridCoord {
  int col = 0;
  int row = 0;
  bool operator==(const GridCoord&) const = default;
};

// The four column-first traversals of a width x height grid, in
// kScanDirections order. Column is the outer loop in every one of them.
std::array<std::vector<GridCoord>, 4> scan_orders(int width, int height);

enum class CellKind {
  // Convex-gated leaky integrator:
  //   [g_in, g_y, g_x] = softmax over three gate pre-activations
  //   s = g_y * s_up + g_x * s_left + g_in * tanh(W x + U_y s_up + U_x s_left + b)
  // Every state is a convex combination of values in [-1, 1].
  kLeaky,
  // Two-dimensional LSTM with one forget gate per axis.
  kMdlstm,
};

// Gate blocks per cell kind: 4 for leaky (candidate, in, y, x),
// 5 for MDLSTM (candidate, input, forget-y, forget-x, output).
int cell_blocks(CellKind kind);

// Parameters of a single scan direction. Each block stores
// W[units][inputs], U_y[units][units], U_x[units][units], b[units].
std::size_t direction_parameter_count(CellKind kind, int inputs, int units);

// Single-direction passes. `params` holds one direction's parameters; the
// result has `units` channels and the input's width and height.
FeatureGrid leaky_cell_forward(std::span<const double> params, const FeatureGrid& input,
                               int units, ScanDirection direction);
FeatureGrid mdlstm_cell_forward(std::span<const double> params, const FeatureGrid& input,
                                int units, ScanDirection direction);

// Four independently parameterized directional passes whose outputs are
// summed (direction_merge). Parameters are the four direction blocks back to
// back, in kScanDirections order.
class RecurrentLayer final : public Layer {
 public:
  RecurrentLayer(CellKind cell, int in_channels, int units);

  std::string kind() const override { return cell_ == CellKind::kLeaky ? "leaky" : "mdlstm"; }
  std::size_t parameter_count() const override;
  int cell_count() const override { return 4 * units_; }
  int output_channels() const override { return units_; }
  int fan_in() const override { return in_channels_ + 2 * units_; }
  FeatureGrid forward(std::span<const double> params, const FeatureGrid& input,
                      std::unique_ptr<LayerCache>& cache, Execution exec) const override;
  FeatureGrid backward(std::span<const double> params, const FeatureGrid& input,
                       const FeatureGrid& output, const LayerCache* cache,
                       const FeatureGrid& grad_output, std::span<double> grad_params,
                       Execution exec) const override;

  // One direction only; exposes the intermediate results for tests.
  FeatureGrid forward_direction(std::span<const double> params, const FeatureGrid& input,
                                ScanDirection direction) const;

 private:
  CellKind cell_;
  int in_channels_, units_;
};

}  // namespace tablereader
