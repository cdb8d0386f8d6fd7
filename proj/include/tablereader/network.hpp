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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tablereader/alphabet.hpp"
#include "tablereader/gabor.hpp"
#include "tablereader/layers.hpp"
#include "tablereader/output_matrix.hpp"
#include "tablereader/raster.hpp"

namespace tablereader {

enum class StageKind { kSubsample, kLeaky, kMdlstm, kTanh, kCollapse, kSoftmax };

struct StageDescriptor {
  StageKind kind = StageKind::kTanh;
  int units = 0;  // ignored by collapse; softmax takes the alphabet size
  int fy = 1;     // subsample only
  int fx = 1;

  bool operator==(const StageDescriptor&) const = default;
};

// Complete, serializable description of one network. The descriptor is a
// JSON document:
//
//   {
//     "name": "N1",
//     "field_type": "NAME",              // optional
//     "input_height": 128,
//     "gabor": {"orientations_deg": [0, 45, 90, 135], "wavelength": 8,
//               "sigma": 4, "kernel_size": 11},
//     "stages": [{"kind": "subsample", "fy": 4, "fx": 3, "units": 16},
//                {"kind": "leaky", "units": 24}, ...,
//                {"kind": "collapse"}, {"kind": "softmax"}],
//     "alphabet": "NAME",                // field alphabet, or a symbol list
//     "seed": 1
//   }
struct NetworkSpec {
  std::string name;
  std::optional<FieldType> field_type;
  int input_height = 128;
  GaborBank gabor;
  std::vector<StageDescriptor> stages;
  Alphabet alphabet;
  std::uint64_t seed = 1;

  // Throws FormatError unless the stage plan ends in collapse + softmax with
  // exactly one collapse, all factors/units are >= 1 and the alphabet has at
  // least one task symbol.
  void validate() const;

  nlohmann::json to_json() const;
  static NetworkSpec from_json(const nlohmann::json& doc);
  static NetworkSpec load(const std::string& path);
};

struct LayerParameters {
  std::string name;
  std::vector<double> values;
  std::vector<double> velocity;  // momentum buffer, same length as values

  bool operator==(const LayerParameters&) const = default;
};

// Trainable parameters, one flat array per trainable stage in descriptor
// order. The Gabor front end has none.
struct WeightStore {
  std::vector<LayerParameters> layers;

  std::size_t trainable_count() const;
  bool operator==(const WeightStore&) const = default;
};

// Gradients, shaped like WeightStore::layers[i].values.
using Gradients = std::vector<std::vector<double>>;

// Activations of one forward pass, kept for backward.
struct ForwardTrace {
  FeatureGrid gabor;
  std::vector<FeatureGrid> activations;  // output of every stage
  std::vector<std::unique_ptr<LayerCache>> caches;
  ColumnMatrix logits;
};

class Network {
 public:
  explicit Network(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  std::size_t trainable_count() const;
  int cell_count() const;
  int output_neurons() const { return spec_.alphabet.size(); }
  // Timesteps produced for an input of the given width.
  int timesteps(int width) const;

  // Uniform in [-sqrt(3/fan_in), +sqrt(3/fan_in)] per layer, from a generator
  // seeded with `seed`.
  WeightStore initialize(std::uint64_t seed) const;
  WeightStore initialize() const { return initialize(spec_.seed); }
  Gradients zero_gradients() const;

  // Gabor -> stages -> softmax. Throws on a wrong input height or a
  // non-finite activation.
  OutputMatrix forward(const WeightStore& weights, const Raster& input,
                       ForwardTrace* trace = nullptr,
                       Execution exec = Execution::kParallel) const;

  // Reverse-mode gradients of a scalar loss whose gradient with respect to
  // the pre-softmax logits is `grad_logits`.
  Gradients backward(const WeightStore& weights, const ForwardTrace& trace,
                     const ColumnMatrix& grad_logits,
                     Execution exec = Execution::kParallel) const;

  const std::vector<std::unique_ptr<Layer>>& layers() const { return layers_; }

 private:
  NetworkSpec spec_;
  std::vector<Kernel> kernels_;
  std::vector<std::unique_ptr<Layer>> layers_;  // one per stage except collapse is kept too
};

OutputMatrix network_forward(const Network& net, const WeightStore& weights,
                             const Raster& input);
Gradients network_backward(const Network& net, const WeightStore& weights,
                           const Raster& input, const ColumnMatrix& grad_logits);

std::string to_string(StageKind kind);

}  // namespace tablereader
