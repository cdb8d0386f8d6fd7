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

#include "tablereader/network.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "tablereader/recurrent.hpp"

namespace tablereader {

using nlohmann::json;

std::string to_string(StageKind kind) {
  switch (kind) {
    case StageKind::kSubsample: return "subsample";
    case StageKind::kLeaky: return "leaky";
    case StageKind::kMdlstm: return "mdlstm";
    case StageKind::kTanh: return "tanh";
    case StageKind::kCollapse: return "collapse";
    case StageKind::kSoftmax: return "softmax";
  }
  return "?";
}

namespace {

StageKind parse_stage_kind(const std::string& s) {
  for (StageKind k : {StageKind::kSubsample, StageKind::kLeaky, StageKind::kMdlstm,
                      StageKind::kTanh, StageKind::kCollapse, StageKind::kSoftmax})
    if (to_string(k) == s) return k;
  throw FormatError("unknown stage kind '" + s + "'");
}

}  // namespace

void NetworkSpec::validate() const {
  if (input_height < 1) throw FormatError(name + ": input_height must be >= 1");
  if (alphabet.symbols().empty()) throw FormatError(name + ": empty alphabet");
  if (stages.size() < 2 || stages.back().kind != StageKind::kSoftmax ||
      stages[stages.size() - 2].kind != StageKind::kCollapse)
    throw FormatError(name + ": stage plan must end with collapse followed by softmax");
  int collapses = 0;
  for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
    const auto& s = stages[i];
    switch (s.kind) {
      case StageKind::kCollapse: ++collapses; break;
      case StageKind::kSoftmax:
        throw FormatError(name + ": softmax must be the last stage");
      case StageKind::kSubsample:
        if (s.fy < 1 || s.fx < 1)
          throw FormatError(name + ": subsample factors must be >= 1");
        [[fallthrough]];
      default:
        if (s.units < 1) throw FormatError(name + ": stage " + std::to_string(i) +
                                           " needs units >= 1");
    }
  }
  if (collapses != 1) throw FormatError(name + ": exactly one collapse stage required");
  if (gabor.orientations_deg.empty())
    throw FormatError(name + ": Gabor bank needs at least one orientation");
  if (gabor.kernel_size < 1 || gabor.kernel_size % 2 == 0)
    throw FormatError(name + ": Gabor kernel size must be odd");
}

json NetworkSpec::to_json() const {
  json doc;
  doc["name"] = name;
  if (field_type) doc["field_type"] = std::string(tablereader::to_string(*field_type));
  doc["input_height"] = input_height;
  doc["gabor"] = {{"orientations_deg", gabor.orientations_deg},
                  {"wavelength", gabor.wavelength},
                  {"sigma", gabor.sigma},
                  {"kernel_size", gabor.kernel_size}};
  json st = json::array();
  for (const auto& s : stages) {
    json j{{"kind", to_string(s.kind)}};
    if (s.kind == StageKind::kSubsample) {
      j["fy"] = s.fy;
      j["fx"] = s.fx;
    }
    if (s.kind != StageKind::kCollapse && s.kind != StageKind::kSoftmax) j["units"] = s.units;
    st.push_back(j);
  }
  doc["stages"] = st;
  auto catalog = field_type ? std::optional(field_alphabet(*field_type)) : std::nullopt;
  if (catalog && *catalog == alphabet) doc["alphabet"] = alphabet.name();
  else doc["alphabet"] = alphabet.symbols();
  doc["seed"] = seed;
  return doc;
}

NetworkSpec NetworkSpec::from_json(const json& doc) {
  try {
    NetworkSpec spec;
    spec.name = doc.value("name", std::string("unnamed"));
    if (doc.contains("field_type")) {
      auto ft = parse_field_type(doc.at("field_type").get<std::string>());
      if (!ft) throw FormatError("unknown field_type in descriptor");
      spec.field_type = ft;
    }
    spec.input_height = doc.at("input_height").get<int>();
    if (doc.contains("gabor")) {
      const auto& g = doc.at("gabor");
      spec.gabor.orientations_deg =
          g.value("orientations_deg", spec.gabor.orientations_deg);
      spec.gabor.wavelength = g.value("wavelength", spec.gabor.wavelength);
      spec.gabor.sigma = g.value("sigma", spec.gabor.sigma);
      spec.gabor.kernel_size = g.value("kernel_size", spec.gabor.kernel_size);
    }
    for (const auto& j : doc.at("stages")) {
      StageDescriptor s;
      s.kind = parse_stage_kind(j.at("kind").get<std::string>());
      s.units = j.value("units", 0);
      s.fy = j.value("fy", 1);
      s.fx = j.value("fx", 1);
      spec.stages.push_back(s);
    }
    const auto& a = doc.at("alphabet");
    if (a.is_string()) {
      auto ft = parse_field_type(a.get<std::string>());
      if (!ft) throw FormatError("unknown alphabet name '" + a.get<std::string>() + "'");
      spec.alphabet = field_alphabet(*ft);
    } else {
      spec.alphabet = Alphabet(a.get<std::vector<std::string>>(), "custom");
    }
    spec.seed = doc.value("seed", std::uint64_t{1});
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw FormatError(std::string("network descriptor: ") + e.what());
  }
}

NetworkSpec NetworkSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open network descriptor " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::size_t WeightStore::trainable_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.values.size();
  return n;
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  kernels_ = make_gabor_kernels(spec_.gabor);
  int channels = static_cast<int>(kernels_.size());
  for (const auto& s : spec_.stages) {
    std::unique_ptr<Layer> layer;
    switch (s.kind) {
      case StageKind::kSubsample:
        layer = std::make_unique<SubsampleLayer>(channels, s.units, s.fy, s.fx);
        break;
      case StageKind::kLeaky:
        layer = std::make_unique<RecurrentLayer>(CellKind::kLeaky, channels, s.units);
        break;
      case StageKind::kMdlstm:
        layer = std::make_unique<RecurrentLayer>(CellKind::kMdlstm, channels, s.units);
        break;
      case StageKind::kTanh:
        layer = std::make_unique<TanhLayer>(channels, s.units);
        break;
      case StageKind::kCollapse:
        layer = std::make_unique<CollapseLayer>(channels);
        break;
      case StageKind::kSoftmax:
        layer = std::make_unique<OutputLayer>(channels, spec_.alphabet.size());
        break;
    }
    channels = layer->output_channels();
    layers_.push_back(std::move(layer));
  }
}

std::size_t Network::trainable_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l->parameter_count();
  return n;
}

int Network::cell_count() const {
  int n = 0;
  for (const auto& l : layers_) n += l->cell_count();
  return n;
}

int Network::timesteps(int width) const {
  for (const auto& l : layers_) width = l->output_width(width);
  return width;
}

WeightStore Network::initialize(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  WeightStore store;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l->parameter_count() == 0) continue;
    LayerParameters p;
    p.name = "stage" + std::to_string(i) + "_" + l->kind();
    p.values.resize(l->parameter_count());
    p.velocity.assign(l->parameter_count(), 0.0);
    // Uniform with variance 1/fan_in keeps activations from shrinking
    // through the stack.
    l->initialize(p.values, rng, std::sqrt(3.0 / l->fan_in()));
    store.layers.push_back(std::move(p));
  }
  return store;
}

Gradients Network::zero_gradients() const {
  Gradients g;
  for (const auto& l : layers_)
    if (l->parameter_count() > 0) g.emplace_back(l->parameter_count(), 0.0);
  return g;
}

OutputMatrix Network::forward(const WeightStore& weights, const Raster& input,
                              ForwardTrace* trace, Execution exec) const {
  if (input.height() != spec_.input_height)
    throw Error(spec_.name + ": input height " + std::to_string(input.height()) +
                " does not match the network's " + std::to_string(spec_.input_height));
  ForwardTrace local;
  ForwardTrace& t = trace ? *trace : local;
  t.activations.clear();
  t.caches.clear();
  t.gabor = gabor_forward(input, kernels_, exec);

  std::size_t param_index = 0;
  const FeatureGrid* current = &t.gabor;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    std::span<const double> params;
    if (l->parameter_count() > 0) {
      if (param_index >= weights.layers.size())
        throw Error(spec_.name + ": weight store has too few layers");
      params = weights.layers[param_index++].values;
    }
    std::unique_ptr<LayerCache> cache;
    FeatureGrid out = l->forward(params, *current, cache, exec);
    require_finite(out, spec_.name + " stage " + std::to_string(i) + " (" + l->kind() + ")");
    t.activations.push_back(std::move(out));
    t.caches.push_back(std::move(cache));
    current = &t.activations.back();
  }
  if (param_index != weights.layers.size())
    throw Error(spec_.name + ": weight store has too many layers");

  const FeatureGrid& logit_grid = t.activations.back();
  t.logits = ColumnMatrix(logit_grid.width(), logit_grid.channels());
  for (int x = 0; x < logit_grid.width(); ++x)
    for (int k = 0; k < logit_grid.channels(); ++k) t.logits.at(x, k) = logit_grid.at(x, 0, k);
  return softmax_columns(t.logits);
}

Gradients Network::backward(const WeightStore& weights, const ForwardTrace& trace,
                            const ColumnMatrix& grad_logits, Execution exec) const {
  if (trace.activations.size() != layers_.size())
    throw Error(spec_.name + ": backward needs a trace from forward");
  if (grad_logits.timesteps != trace.logits.timesteps ||
      grad_logits.classes != trace.logits.classes)
    throw Error(spec_.name + ": logit gradient shape mismatch");

  Gradients grads = zero_gradients();
  FeatureGrid grad(grad_logits.timesteps, 1, grad_logits.classes);
  for (int t = 0; t < grad_logits.timesteps; ++t)
    for (int k = 0; k < grad_logits.classes; ++k) grad.at(t, 0, k) = grad_logits.at(t, k);

  std::size_t param_index = grads.size();
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const auto& l = layers_[i];
    std::span<const double> params;
    std::span<double> gparams;
    if (l->parameter_count() > 0) {
      --param_index;
      params = weights.layers[param_index].values;
      gparams = grads[param_index];
    }
    const FeatureGrid& input = i == 0 ? trace.gabor : trace.activations[i - 1];
    grad = l->backward(params, input, trace.activations[i], trace.caches[i].get(), grad,
                       gparams, exec);
  }
  for (std::size_t g = 0; g < grads.size(); ++g)
    for (double v : grads[g])
      if (!std::isfinite(v))
        throw NumericError(spec_.name + ": non-finite gradient in " + weights.layers[g].name);
  return grads;
}

OutputMatrix network_forward(const Network& net, const WeightStore& weights,
                             const Raster& input) {
  return net.forward(weights, input);
}

Gradients network_backward(const Network& net, const WeightStore& weights,
                           const Raster& input, const ColumnMatrix& grad_logits) {
  ForwardTrace trace;
  net.forward(weights, input, &trace);
  return net.backward(weights, trace, grad_logits);
}

}  // namespace tablereader
