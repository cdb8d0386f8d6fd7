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

#include "tablereader/training.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "tablereader/checkpoint.hpp"
#include "tablereader/ctc.hpp"

namespace tablereader::training {

using nlohmann::json;

void TrainConfig::validate() const {
  if (!(momentum >= 0.0 && momentum < 1.0)) throw Error("momentum must lie in [0, 1)");
  if (!(main_lr > 0.0 && post_lr > 0.0)) throw Error("learning rates must be positive");
  if (main_epochs < 0 || post_epochs < 0) throw Error("epoch counts must be >= 0");
  if (samples_per_epoch < 1) throw Error("samples_per_epoch must be >= 1");
  if (batch_size < 1) throw Error("batch_size must be >= 1");
  if (gradient_clip < 0.0) throw Error("gradient_clip must be >= 0");
}

json TrainConfig::to_json() const {
  return {{"momentum", momentum},
          {"main_lr", main_lr},
          {"post_lr", post_lr},
          {"main_epochs", main_epochs},
          {"post_epochs", post_epochs},
          {"samples_per_epoch", samples_per_epoch},
          {"batch_size", batch_size},
          {"gradient_clip", gradient_clip},
          {"seed", seed},
          {"precision", precision == Precision::kDouble ? "double" : "single"}};
}

TrainConfig TrainConfig::from_json(const json& doc) {
  TrainConfig c;
  try {
    c.momentum = doc.value("momentum", c.momentum);
    c.main_lr = doc.value("main_lr", c.main_lr);
    c.post_lr = doc.value("post_lr", c.post_lr);
    c.main_epochs = doc.value("main_epochs", c.main_epochs);
    c.post_epochs = doc.value("post_epochs", c.post_epochs);
    c.samples_per_epoch = doc.value("samples_per_epoch", c.samples_per_epoch);
    c.batch_size = doc.value("batch_size", c.batch_size);
    c.gradient_clip = doc.value("gradient_clip", c.gradient_clip);
    c.seed = doc.value("seed", c.seed);
    const std::string p = doc.value("precision", std::string("double"));
    if (p == "double") c.precision = Precision::kDouble;
    else if (p == "single") c.precision = Precision::kSingle;
    else throw FormatError("precision must be 'single' or 'double'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("training config: ") + e.what());
  }
  return c;
}

SplitManifest split_dataset(const std::vector<ManifestEntry>& entries, int train_parts,
                            int validation_parts, std::uint64_t seed) {
  if (train_parts < 0 || validation_parts < 0 || train_parts + validation_parts == 0)
    throw Error("split ratio must have non-negative parts and a positive sum");
  SplitManifest split;
  std::vector<ManifestEntry> usable;
  for (const auto& e : entries) {
    if (e.image.empty() || e.transcript.empty()) ++split.dropped;
    else usable.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(usable.begin(), usable.end(), rng);
  const auto n_val = static_cast<std::size_t>(std::llround(
      static_cast<double>(usable.size()) * validation_parts / (train_parts + validation_parts)));
  split.validation.assign(usable.begin(), usable.begin() + n_val);
  split.train.assign(usable.begin() + n_val, usable.end());
  return split;
}

std::vector<std::size_t> epoch_sample(std::size_t set_size, std::size_t k, int epoch,
                                      std::uint64_t seed) {
  std::vector<std::size_t> idx(set_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch)};
  std::mt19937_64 rng(seq);
  std::shuffle(idx.begin(), idx.end(), rng);
  if (k < set_size) idx.resize(k);
  return idx;
}

void sgd_momentum_step(WeightStore& weights, const Gradients& gradients, double lr,
                       double momentum) {
  if (gradients.size() != weights.layers.size())
    throw Error("sgd_momentum_step: gradient/weight layer count mismatch");
  for (std::size_t l = 0; l < weights.layers.size(); ++l) {
    auto& layer = weights.layers[l];
    if (gradients[l].size() != layer.values.size())
      throw Error("sgd_momentum_step: gradient size mismatch in " + layer.name);
    if (layer.velocity.size() != layer.values.size())
      layer.velocity.assign(layer.values.size(), 0.0);
    for (std::size_t i = 0; i < layer.values.size(); ++i) {
      layer.velocity[i] = momentum * layer.velocity[i] - lr * gradients[l][i];
      layer.values[i] += layer.velocity[i];
    }
  }
}

bool Checkpoint::operator==(const Checkpoint& other) const {
  return spec.to_json() == other.spec.to_json() && weights == other.weights &&
         config.to_json() == other.config.to_json() && epoch == other.epoch &&
         history == other.history;
}

namespace {

struct MemberResult {
  Gradients grads;
  double loss = 0.0;
  bool feasible = false;
  std::exception_ptr error;
};

MemberResult evaluate_member(const Network& net, const WeightStore& weights,
                             const Sample& sample) {
  MemberResult r;
  try {
    ForwardTrace trace;
    const OutputMatrix m = net.forward(weights, sample.image, &trace, Execution::kSerial);
    ctc::CtcResult c = ctc::gradient(m, sample.labels);
    if (!c.feasible) return r;
    r.feasible = true;
    r.loss = c.neg_log_prob;
    r.grads = net.backward(weights, trace, c.grad_logits, Execution::kSerial);
  } catch (...) {
    r.error = std::current_exception();
  }
  return r;
}

}  // namespace

BatchResult batch_gradient(const Network& net, const WeightStore& weights,
                           const std::vector<const Sample*>& batch, Execution exec) {
  std::vector<MemberResult> members(batch.size());
  const int n = static_cast<int>(batch.size());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) members[i] = evaluate_member(net, weights, *batch[i]);
  } else {
    for (int i = 0; i < n; ++i) members[i] = evaluate_member(net, weights, *batch[i]);
  }

  BatchResult result;
  result.gradients = net.zero_gradients();
  for (auto& m : members) {
    if (m.error) std::rethrow_exception(m.error);
    if (!m.feasible) continue;
    ++result.feasible;
    result.loss_sum += m.loss;
    for (std::size_t l = 0; l < m.grads.size(); ++l)
      for (std::size_t i = 0; i < m.grads[l].size(); ++i)
        result.gradients[l][i] += m.grads[l][i];
  }
  if (result.feasible > 1)
    for (auto& g : result.gradients)
      for (double& v : g) v /= result.feasible;
  return result;
}

double mean_loss(const Network& net, const WeightStore& weights,
                 const std::vector<Sample>& samples, Execution exec) {
  std::vector<double> losses(samples.size(), ctc::kInfeasible);
  std::vector<std::exception_ptr> errors(samples.size());
  const int n = static_cast<int>(samples.size());
  auto one = [&](int i) {
    try {
      losses[i] = ctc::neg_log_prob(
          net.forward(weights, samples[i].image, nullptr, Execution::kSerial),
          samples[i].labels);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) one(i);
  } else {
    for (int i = 0; i < n; ++i) one(i);
  }
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    if (losses[i] == ctc::kInfeasible) continue;
    sum += losses[i];
    ++count;
  }
  return count ? sum / count : ctc::kInfeasible;
}

std::string format_log_line(const EpochRecord& r) {
  std::ostringstream out;
  out.precision(6);
  out << r.epoch << '\t' << r.phase << '\t' << r.lr << '\t' << r.train_loss << '\t'
      << r.validation_loss;
  return out.str();
}

Checkpoint train(const TrainConfig& config, const std::vector<Sample>& train_set,
                 const std::vector<Sample>& validation_set, const NetworkSpec& spec,
                 const TrainHooks& hooks, std::optional<Checkpoint> resume) {
  config.validate();
  if (config.precision == Precision::kSingle)
    throw Error("single-precision training is not available in this build; use double");
  const Network net(spec);

  Checkpoint cp;
  if (resume) {
    cp = std::move(*resume);
    if (cp.spec.to_json() != spec.to_json())
      throw Error("resume checkpoint was trained with a different network descriptor");
  } else {
    cp.spec = spec;
    cp.weights = net.initialize();
  }
  cp.config = config;

  auto emit = [&](const EpochRecord& rec) {
    cp.history.push_back(rec);
    if (hooks.log) *hooks.log << format_log_line(rec) << '\n' << std::flush;
    if (hooks.on_epoch) hooks.on_epoch(rec);
    if (hooks.checkpoint_path) save_checkpoint(cp, *hooks.checkpoint_path);
  };

  if (cp.history.empty()) {
    EpochRecord init;
    init.phase = "init";
    init.train_loss = mean_loss(net, cp.weights, train_set, hooks.exec);
    init.validation_loss =
        validation_set.empty() ? 0.0 : mean_loss(net, cp.weights, validation_set, hooks.exec);
    emit(init);
  }

  const int total_epochs = config.main_epochs + config.post_epochs;
  while (cp.epoch < total_epochs) {
    const int epoch = cp.epoch + 1;
    const bool main_phase = epoch <= config.main_epochs;
    const double lr = main_phase ? config.main_lr : config.post_lr;
    const auto order = epoch_sample(train_set.size(),
                                    static_cast<std::size_t>(config.samples_per_epoch), epoch,
                                    config.seed);
    double loss_sum = 0.0;
    int feasible = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      std::vector<const Sample*> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i)
        batch.push_back(&train_set[order[i]]);
      BatchResult br = batch_gradient(net, cp.weights, batch, hooks.exec);
      if (!std::isfinite(br.loss_sum))
        throw NumericError("non-finite training loss in epoch " + std::to_string(epoch));
      if (br.feasible == 0) continue;
      if (config.gradient_clip > 0.0)
        for (auto& g : br.gradients)
          for (double& v : g) v = std::clamp(v, -config.gradient_clip, config.gradient_clip);
      sgd_momentum_step(cp.weights, br.gradients, lr, config.momentum);
      loss_sum += br.loss_sum;
      feasible += br.feasible;
    }
    cp.epoch = epoch;
    EpochRecord rec;
    rec.epoch = epoch;
    rec.phase = main_phase ? "main" : "post";
    rec.lr = lr;
    rec.train_loss = feasible ? loss_sum / feasible : 0.0;
    rec.validation_loss =
        validation_set.empty() ? 0.0 : mean_loss(net, cp.weights, validation_set, hooks.exec);
    if (!std::isfinite(rec.validation_loss) && !validation_set.empty())
      throw NumericError("non-finite validation loss in epoch " + std::to_string(epoch));
    emit(rec);
  }
  return cp;
}

}  // namespace tablereader::training
