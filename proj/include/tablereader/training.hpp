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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tablereader/manifest.hpp"
#include "tablereader/network.hpp"

namespace tablereader::training {

enum class Precision { kSingle, kDouble };

struct TrainConfig {
  double momentum = 0.9;
  double main_lr = 0.002;
  double post_lr = 0.001;
  int main_epochs = 0;
  int post_epochs = 0;
  int samples_per_epoch = 20000;
  int batch_size = 16;
  double gradient_clip = 0.0;  // 0 disables clipping
  std::uint64_t seed = 1;
  Precision precision = Precision::kDouble;

  void validate() const;
  nlohmann::json to_json() const;
  // Missing keys keep their defaults.
  static TrainConfig from_json(const nlohmann::json& doc);
};

struct SplitManifest {
  std::vector<ManifestEntry> train;
  std::vector<ManifestEntry> validation;
  int dropped = 0;
};

// Drops unusable entries (no image reference or empty transcript), shuffles
// the rest with `seed` and cuts off round(n * validation / (train + validation))
// entries for validation.
SplitManifest split_dataset(const std::vector<ManifestEntry>& entries, int train_parts,
                            int validation_parts, std::uint64_t seed);

// Indices of the samples used in one epoch: the first k of a shuffle seeded
// by (seed, epoch). The whole set when k >= set_size.
std::vector<std::size_t> epoch_sample(std::size_t set_size, std::size_t k, int epoch,
                                      std::uint64_t seed);

// velocity <- momentum * velocity - lr * gradient; weight <- weight + velocity.
void sgd_momentum_step(WeightStore& weights, const Gradients& gradients, double lr,
                       double momentum);

struct Sample {
  Raster image;
  LabelSequence labels;
};

struct EpochRecord {
  int epoch = 0;
  std::string phase;  // "init", "main" or "post"
  double lr = 0.0;
  double train_loss = 0.0;
  double validation_loss = 0.0;

  bool operator==(const EpochRecord&) const = default;
};

struct Checkpoint {
  NetworkSpec spec;
  WeightStore weights;
  TrainConfig config;
  int epoch = 0;
  std::vector<EpochRecord> history;

  // Weights and velocities compared exactly.
  bool operator==(const Checkpoint& other) const;
};

struct BatchResult {
  Gradients gradients;  // averaged over the feasible members
  double loss_sum = 0.0;
  int feasible = 0;
};

// CTC loss and gradient of a mini-batch. kParallel evaluates members
// concurrently; both modes sum member gradients in member order and agree
// bitwise.
BatchResult batch_gradient(const Network& net, const WeightStore& weights,
                           const std::vector<const Sample*>& batch,
                           Execution exec = Execution::kParallel);

// Mean CTC loss over the feasible samples.
double mean_loss(const Network& net, const WeightStore& weights,
                 const std::vector<Sample>& samples, Execution exec = Execution::kParallel);

struct TrainHooks {
  std::optional<std::filesystem::path> checkpoint_path;  // rewritten every epoch
  std::ostream* log = nullptr;                           // one TSV line per epoch
  std::function<void(const EpochRecord&)> on_epoch;
  Execution exec = Execution::kParallel;
};

// Runs main_epochs at main_lr followed by post_epochs at post_lr. Starts from
// `resume` when given (continuing its epoch counter), otherwise from fresh
// weights seeded by spec.seed.
Checkpoint train(const TrainConfig& config, const std::vector<Sample>& train_set,
                 const std::vector<Sample>& validation_set, const NetworkSpec& spec,
                 const TrainHooks& hooks = {}, std::optional<Checkpoint> resume = std::nullopt);

// Tab-separated epoch, phase, lr, mean train loss, validation loss.
std::string format_log_line(const EpochRecord& record);

}  // namespace tablereader::training
