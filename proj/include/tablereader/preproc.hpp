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

#include <vector>

#include "tablereader/field_type.hpp"
#include "tablereader/raster.hpp"

namespace tablereader::preproc {

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

struct FieldPolygon {
  std::vector<Point> vertices;
  FieldType field_type = FieldType::kName;
  bool operator==(const FieldPolygon&) const = default;
};

// Inclusive pixel box.
struct Box {
  int left = 0;
  int top = 0;
  int right = 0;
  int bottom = 0;
  bool operator==(const Box&) const = default;
};

enum class Axis {
  kHorizontal,  // one value per row
  kVertical,    // one value per column
};

struct ProfileVector {
  std::vector<double> values;
  Axis axis = Axis::kHorizontal;
};

struct NormalizationSpec {
  int target_height = 128;
  double low_percentile = 0.05;
  double high_percentile = 0.95;
  int black_target = 0;
  int white_target = 255;
};

struct LineDetectParams {
  int smoothing_window = 5;
  double threshold_fraction = 0.5;
  int min_separation = 8;
};

inline constexpr int kDefaultMargin = 20;

// Bounding box of the polygon grown by `margin` and clamped to the page.
// Throws GeometryError when the clamped box has zero area.
Box enlarge_polygon(const FieldPolygon& poly, int margin, const Raster& page);

ProfileVector projection_profile(const Raster& raster, Axis axis);
ProfileVector projection_profile(const Raster& raster, Axis axis, const Box& region);

// Peaks of the smoothed profile, strongest first with non-maximum
// suppression, returned in ascending position order.
std::vector<int> detect_table_lines(const ProfileVector& profile,
                                    const LineDetectParams& params = {});

// Copy of the pixels strictly between the four lines.
Raster cut_cell(const Raster& page, int left, int right, int top, int bottom);

Raster normalize_height(const Raster& raster, int target_height);
Raster normalize_contrast(const Raster& raster, const NormalizationSpec& spec);

struct CellBounds {
  int left = 0;
  int right = 0;
  int top = 0;
  int bottom = 0;
};

// Refines an approximate field polygon to the enclosing ruled table lines.
// A side with no detected line falls back to the enlarged box edge.
CellBounds locate_cell(const Raster& page, const FieldPolygon& poly,
                       int margin = kDefaultMargin, const LineDetectParams& params = {});

// Full field pipeline: locate, cut, height- and contrast-normalize.
Raster extract_field(const Raster& page, const FieldPolygon& poly,
                     int margin = kDefaultMargin, const LineDetectParams& params = {});

}  // namespace tablereader::preproc
