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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tablereader/common.hpp"

namespace tablereader {

// Dense (height x width x channels) activation block. Position (x, y) is
// column x, row y; channels are contiguous.
class FeatureGrid {
 public:
  FeatureGrid() = default;
  FeatureGrid(int width, int height, int channels, double fill = 0.0)
      : width_(width), height_(height), channels_(channels),
        values_(static_cast<std::size_t>(width) * height * channels, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t size() const { return values_.size(); }

  double& at(int x, int y, int c) { return values_[offset(x, y) + c]; }
  double at(int x, int y, int c) const { return values_[offset(x, y) + c]; }

  std::span<double> cell(int x, int y) {
    return {values_.data() + offset(x, y), static_cast<std::size_t>(channels_)};
  }
  std::span<const double> cell(int x, int y) const {
    return {values_.data() + offset(x, y), static_cast<std::size_t>(channels_)};
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool same_shape(const FeatureGrid& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }
  bool operator==(const FeatureGrid&) const = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

// Mirror columns and/or rows. An involution: flip(flip(g)) == g.
FeatureGrid flip(const FeatureGrid& grid, bool flip_x, bool flip_y);

// Throws NumericError naming `where` and the first offending position.
void require_finite(const FeatureGrid& grid, const std::string& where);

}  // namespace tablereader
