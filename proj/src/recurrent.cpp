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

#include "tablereader/recurrent.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace tablereader {

std::array<std::vector<GridCoord>, 4> scan_orders(int width, int height) {
  if (width < 1 || height < 1) throw GeometryError("scan_orders: grid must be non-empty");
  std::array<std::vector<GridCoord>, 4> orders;
  for (std::size_t d = 0; d < kScanDirections.size(); ++d) {
    const ScanDirection dir = kScanDirections[d];
    auto& order = orders[d];
    order.reserve(static_cast<std::size_t>(width) * height);
    for (int i = 0; i < width; ++i) {
      const int col = dir.right_to_left ? width - 1 - i : i;
      for (int j = 0; j < height; ++j) {
        const int row = dir.bottom_up ? height - 1 - j : j;
        order.push_back({col, row});
      }
    }
  }
  return orders;
}

int cell_blocks(CellKind kind) { return kind == CellKind::kLeaky ? 4 : 5; }

std::size_t direction_parameter_count(CellKind kind, int inputs, int units) {
  return static_cast<std::size_t>(cell_blocks(kind)) * units * (inputs + 2 * units + 1);
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Gate pre-activations z[block * units + u] from the current input and the
// two already-visited neighbours. Missing neighbours (grid border) are null.
class GateAffine {
 public:
  GateAffine(std::span<const double> params, int blocks, int inputs, int units)
      : p_(params.data()), blocks_(blocks), inputs_(inputs), units_(units),
        block_size_(static_cast<std::size_t>(units) * (inputs + 2 * units + 1)) {}

  void forward(std::span<const double> in, const double* hy, const double* hx,
               double* z) const {
    for (int k = 0; k < blocks_; ++k) {
      for (int u = 0; u < units_; ++u) {
        const double* w = W(k) + static_cast<std::size_t>(u) * inputs_;
        double acc = b(k)[u];
        for (int i = 0; i < inputs_; ++i) acc += w[i] * in[i];
        if (hy) {
          const double* uy = Uy(k) + static_cast<std::size_t>(u) * units_;
          for (int v = 0; v < units_; ++v) acc += uy[v] * hy[v];
        }
        if (hx) {
          const double* ux = Ux(k) + static_cast<std::size_t>(u) * units_;
          for (int v = 0; v < units_; ++v) acc += ux[v] * hx[v];
        }
        z[k * units_ + u] = acc;
      }
    }
  }

  // Accumulates parameter gradients and the gradients reaching the input and
  // both neighbour states.
  void backward(std::span<const double> in, const double* hy, const double* hx,
                const double* dz, double* grad_params, std::span<double> din, double* dhy,
                double* dhx) const {
    for (int k = 0; k < blocks_; ++k) {
      double* g = grad_params + k * block_size_;
      double* gW = g;
      double* gUy = gW + static_cast<std::size_t>(units_) * inputs_;
      double* gUx = gUy + static_cast<std::size_t>(units_) * units_;
      double* gb = gUx + static_cast<std::size_t>(units_) * units_;
      for (int u = 0; u < units_; ++u) {
        const double d = dz[k * units_ + u];
        if (d == 0.0) continue;
        gb[u] += d;
        const double* w = W(k) + static_cast<std::size_t>(u) * inputs_;
        double* gw = gW + static_cast<std::size_t>(u) * inputs_;
        for (int i = 0; i < inputs_; ++i) {
          gw[i] += d * in[i];
          din[i] += d * w[i];
        }
        if (hy) {
          const double* uy = Uy(k) + static_cast<std::size_t>(u) * units_;
          double* guy = gUy + static_cast<std::size_t>(u) * units_;
          for (int v = 0; v < units_; ++v) {
            guy[v] += d * hy[v];
            dhy[v] += d * uy[v];
          }
        }
        if (hx) {
          const double* ux = Ux(k) + static_cast<std::size_t>(u) * units_;
          double* gux = gUx + static_cast<std::size_t>(u) * units_;
          for (int v = 0; v < units_; ++v) {
            gux[v] += d * hx[v];
            dhx[v] += d * ux[v];
          }
        }
      }
    }
  }

 private:
  const double* W(int k) const { return p_ + k * block_size_; }
  const double* Uy(int k) const { return W(k) + static_cast<std::size_t>(units_) * inputs_; }
  const double* Ux(int k) const { return Uy(k) + static_cast<std::size_t>(units_) * units_; }
  const double* b(int k) const { return Ux(k) + static_cast<std::size_t>(units_) * units_; }

  const double* p_;
  int blocks_, inputs_, units_;
  std::size_t block_size_;
};

// Everything one canonical (top-down, left-to-right) pass keeps for BPTT.
// The input is stored already flipped into canonical orientation.
struct DirectionTrace {
  FeatureGrid input;
  FeatureGrid output;  // leaky: state s; MDLSTM: h
  FeatureGrid cell;    // MDLSTM only: c
  FeatureGrid aux;     // leaky: [cand, g_in, g_y, g_x]; MDLSTM: [g, i, f_y, f_x, o, tanh c]
};

struct RecurrentCache final : LayerCache {
  std::array<DirectionTrace, 4> traces;
};

void leaky_canonical(std::span<const double> params, int units, DirectionTrace& t) {
  const FeatureGrid& in = t.input;
  const int H = units;
  GateAffine affine(params, 4, in.channels(), H);
  t.output = FeatureGrid(in.width(), in.height(), H);
  t.aux = FeatureGrid(in.width(), in.height(), 4 * H);
  std::vector<double> z(4 * H);
  for (int x = 0; x < in.width(); ++x) {
    for (int y = 0; y < in.height(); ++y) {
      const double* hy = y > 0 ? t.output.cell(x, y - 1).data() : nullptr;
      const double* hx = x > 0 ? t.output.cell(x - 1, y).data() : nullptr;
      affine.forward(in.cell(x, y), hy, hx, z.data());
      auto s = t.output.cell(x, y);
      auto a = t.aux.cell(x, y);
      for (int u = 0; u < H; ++u) {
        const double cand = std::tanh(z[u]);
        const double zi = z[H + u], zy = z[2 * H + u], zx = z[3 * H + u];
        const double top = std::max({zi, zy, zx});
        const double ei = std::exp(zi - top), ey = std::exp(zy - top), ex = std::exp(zx - top);
        const double norm = ei + ey + ex;
        const double gi = ei / norm, gy = ey / norm, gx = ex / norm;
        s[u] = gi * cand + gy * (hy ? hy[u] : 0.0) + gx * (hx ? hx[u] : 0.0);
        a[u] = cand;
        a[H + u] = gi;
        a[2 * H + u] = gy;
        a[3 * H + u] = gx;
      }
    }
  }
}

FeatureGrid leaky_canonical_backward(std::span<const double> params, int units,
                                     const DirectionTrace& t, FeatureGrid ds,
                                     std::span<double> grad_params) {
  const FeatureGrid& in = t.input;
  const int H = units;
  GateAffine affine(params, 4, in.channels(), H);
  FeatureGrid grad_in(in.width(), in.height(), in.channels());
  std::vector<double> dz(4 * H);
  for (int x = in.width() - 1; x >= 0; --x) {
    for (int y = in.height() - 1; y >= 0; --y) {
      const double* hy = y > 0 ? t.output.cell(x, y - 1).data() : nullptr;
      const double* hx = x > 0 ? t.output.cell(x - 1, y).data() : nullptr;
      double* dhy = y > 0 ? ds.cell(x, y - 1).data() : nullptr;
      double* dhx = x > 0 ? ds.cell(x - 1, y).data() : nullptr;
      auto d = ds.cell(x, y);
      auto a = t.aux.cell(x, y);
      for (int u = 0; u < H; ++u) {
        const double dsu = d[u];
        const double cand = a[u], gi = a[H + u], gy = a[2 * H + u], gx = a[3 * H + u];
        const double vy = hy ? hy[u] : 0.0;
        const double vx = hx ? hx[u] : 0.0;
        const double dgi = dsu * cand, dgy = dsu * vy, dgx = dsu * vx;
        const double dot = gi * dgi + gy * dgy + gx * dgx;
        dz[u] = dsu * gi * (1.0 - cand * cand);
        dz[H + u] = gi * (dgi - dot);
        dz[2 * H + u] = gy * (dgy - dot);
        dz[3 * H + u] = gx * (dgx - dot);
        if (dhy) dhy[u] += dsu * gy;
        if (dhx) dhx[u] += dsu * gx;
      }
      affine.backward(in.cell(x, y), hy, hx, dz.data(), grad_params.data(),
                      grad_in.cell(x, y), dhy, dhx);
    }
  }
  return grad_in;
}

void mdlstm_canonical(std::span<const double> params, int units, DirectionTrace& t) {
  const FeatureGrid& in = t.input;
  const int H = units;
  GateAffine affine(params, 5, in.channels(), H);
  t.output = FeatureGrid(in.width(), in.height(), H);
  t.cell = FeatureGrid(in.width(), in.height(), H);
  t.aux = FeatureGrid(in.width(), in.height(), 6 * H);
  std::vector<double> z(5 * H);
  for (int x = 0; x < in.width(); ++x) {
    for (int y = 0; y < in.height(); ++y) {
      const double* hy = y > 0 ? t.output.cell(x, y - 1).data() : nullptr;
      const double* hx = x > 0 ? t.output.cell(x - 1, y).data() : nullptr;
      const double* cy = y > 0 ? t.cell.cell(x, y - 1).data() : nullptr;
      const double* cx = x > 0 ? t.cell.cell(x - 1, y).data() : nullptr;
      affine.forward(in.cell(x, y), hy, hx, z.data());
      auto h = t.output.cell(x, y);
      auto c = t.cell.cell(x, y);
      auto a = t.aux.cell(x, y);
      for (int u = 0; u < H; ++u) {
        const double g = std::tanh(z[u]);
        const double i = sigmoid(z[H + u]);
        const double fy = sigmoid(z[2 * H + u]);
        const double fx = sigmoid(z[3 * H + u]);
        const double o = sigmoid(z[4 * H + u]);
        c[u] = i * g + fy * (cy ? cy[u] : 0.0) + fx * (cx ? cx[u] : 0.0);
        const double tc = std::tanh(c[u]);
        h[u] = o * tc;
        a[u] = g;
        a[H + u] = i;
        a[2 * H + u] = fy;
        a[3 * H + u] = fx;
        a[4 * H + u] = o;
        a[5 * H + u] = tc;
      }
    }
  }
}

FeatureGrid mdlstm_canonical_backward(std::span<const double> params, int units,
                                      const DirectionTrace& t, FeatureGrid dh,
                                      std::span<double> grad_params) {
  const FeatureGrid& in = t.input;
  const int H = units;
  GateAffine affine(params, 5, in.channels(), H);
  FeatureGrid grad_in(in.width(), in.height(), in.channels());
  FeatureGrid dc(in.width(), in.height(), H);
  std::vector<double> dz(5 * H);
  for (int x = in.width() - 1; x >= 0; --x) {
    for (int y = in.height() - 1; y >= 0; --y) {
      const double* hy = y > 0 ? t.output.cell(x, y - 1).data() : nullptr;
      const double* hx = x > 0 ? t.output.cell(x - 1, y).data() : nullptr;
      const double* cy = y > 0 ? t.cell.cell(x, y - 1).data() : nullptr;
      const double* cx = x > 0 ? t.cell.cell(x - 1, y).data() : nullptr;
      double* dhy = y > 0 ? dh.cell(x, y - 1).data() : nullptr;
      double* dhx = x > 0 ? dh.cell(x - 1, y).data() : nullptr;
      double* dcy = y > 0 ? dc.cell(x, y - 1).data() : nullptr;
      double* dcx = x > 0 ? dc.cell(x - 1, y).data() : nullptr;
      auto dhu = dh.cell(x, y);
      auto dcu = dc.cell(x, y);
      auto a = t.aux.cell(x, y);
      for (int u = 0; u < H; ++u) {
        const double g = a[u], i = a[H + u], fy = a[2 * H + u], fx = a[3 * H + u];
        const double o = a[4 * H + u], tc = a[5 * H + u];
        const double dct = dcu[u] + dhu[u] * o * (1.0 - tc * tc);
        const double d_o = dhu[u] * tc;
        dz[u] = dct * i * (1.0 - g * g);
        dz[H + u] = dct * g * i * (1.0 - i);
        dz[2 * H + u] = dct * (cy ? cy[u] : 0.0) * fy * (1.0 - fy);
        dz[3 * H + u] = dct * (cx ? cx[u] : 0.0) * fx * (1.0 - fx);
        dz[4 * H + u] = d_o * o * (1.0 - o);
        if (dcy) dcy[u] += dct * fy;
        if (dcx) dcx[u] += dct * fx;
      }
      affine.backward(in.cell(x, y), hy, hx, dz.data(), grad_params.data(),
                      grad_in.cell(x, y), dhy, dhx);
    }
  }
  return grad_in;
}

void run_direction(CellKind kind, std::span<const double> params, int units,
                   const FeatureGrid& input, ScanDirection dir, DirectionTrace& trace) {
  trace.input = flip(input, dir.right_to_left, dir.bottom_up);
  if (kind == CellKind::kLeaky) leaky_canonical(params, units, trace);
  else mdlstm_canonical(params, units, trace);
}

FeatureGrid single_direction(CellKind kind, std::span<const double> params,
                             const FeatureGrid& input, int units, ScanDirection dir) {
  if (params.size() != direction_parameter_count(kind, input.channels(), units))
    throw Error("recurrent cell: parameter count does not match the input shape");
  DirectionTrace trace;
  run_direction(kind, params, units, input, dir, trace);
  FeatureGrid out = flip(trace.output, dir.right_to_left, dir.bottom_up);
  require_finite(out, "recurrent cell");
  return out;
}

}  // namespace

FeatureGrid leaky_cell_forward(std::span<const double> params, const FeatureGrid& input,
                               int units, ScanDirection direction) {
  return single_direction(CellKind::kLeaky, params, input, units, direction);
}

FeatureGrid mdlstm_cell_forward(std::span<const double> params, const FeatureGrid& input,
                                int units, ScanDirection direction) {
  return single_direction(CellKind::kMdlstm, params, input, units, direction);
}

RecurrentLayer::RecurrentLayer(CellKind cell, int in_channels, int units)
    : cell_(cell), in_channels_(in_channels), units_(units) {
  if (in_channels < 1 || units < 1) throw Error("recurrent layer needs channels and units");
}

std::size_t RecurrentLayer::parameter_count() const {
  return 4 * direction_parameter_count(cell_, in_channels_, units_);
}

FeatureGrid RecurrentLayer::forward_direction(std::span<const double> params,
                                              const FeatureGrid& input,
                                              ScanDirection direction) const {
  const std::size_t per_dir = direction_parameter_count(cell_, in_channels_, units_);
  const auto d = static_cast<std::size_t>(
      std::find(kScanDirections.begin(), kScanDirections.end(), direction) -
      kScanDirections.begin());
  return single_direction(cell_, params.subspan(d * per_dir, per_dir), input, units_,
                          direction);
}

FeatureGrid RecurrentLayer::forward(std::span<const double> params, const FeatureGrid& input,
                                    std::unique_ptr<LayerCache>& cache, Execution exec) const {
  if (params.size() != parameter_count())
    throw Error("recurrent layer: wrong parameter count");
  if (input.channels() != in_channels_)
    throw Error("recurrent layer: wrong input channel count");
  auto rc = std::make_unique<RecurrentCache>();
  const std::size_t per_dir = direction_parameter_count(cell_, in_channels_, units_);
  std::array<std::exception_ptr, 4> errors;

  auto one = [&](int d) {
    try {
      run_direction(cell_, params.subspan(d * per_dir, per_dir), units_, input,
                    kScanDirections[d], rc->traces[d]);
    } catch (...) {
      errors[d] = std::current_exception();
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static, 1)
    for (int d = 0; d < 4; ++d) one(d);
  } else {
    for (int d = 0; d < 4; ++d) one(d);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::array<FeatureGrid, 4> outputs;
  for (int d = 0; d < 4; ++d)
    outputs[d] = flip(rc->traces[d].output, kScanDirections[d].right_to_left,
                      kScanDirections[d].bottom_up);
  FeatureGrid merged = direction_merge(outputs);
  cache = std::move(rc);
  return merged;
}

FeatureGrid RecurrentLayer::backward(std::span<const double> params, const FeatureGrid& input,
                                     const FeatureGrid&, const LayerCache* cache,
                                     const FeatureGrid& grad_output,
                                     std::span<double> grad_params, Execution exec) const {
  const auto* rc = dynamic_cast<const RecurrentCache*>(cache);
  if (!rc) throw Error("recurrent layer: backward called without a forward trace");
  const std::size_t per_dir = direction_parameter_count(cell_, in_channels_, units_);
  std::array<FeatureGrid, 4> grads;
  std::array<std::exception_ptr, 4> errors;

  auto one = [&](int d) {
    try {
      const ScanDirection dir = kScanDirections[d];
      FeatureGrid g = flip(grad_output, dir.right_to_left, dir.bottom_up);
      auto p = params.subspan(d * per_dir, per_dir);
      auto gp = grad_params.subspan(d * per_dir, per_dir);
      FeatureGrid gin = cell_ == CellKind::kLeaky
                            ? leaky_canonical_backward(p, units_, rc->traces[d], std::move(g), gp)
                            : mdlstm_canonical_backward(p, units_, rc->traces[d], std::move(g), gp);
      grads[d] = flip(gin, dir.right_to_left, dir.bottom_up);
    } catch (...) {
      errors[d] = std::current_exception();
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static, 1)
    for (int d = 0; d < 4; ++d) one(d);
  } else {
    for (int d = 0; d < 4; ++d) one(d);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  FeatureGrid grad_in(input.width(), input.height(), in_channels_);
  for (const auto& g : grads) {
    auto& dst = grad_in.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g.values()[i];
  }
  return grad_in;
}

}  // namespace tablereader
