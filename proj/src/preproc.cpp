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

#include "tablereader/preproc.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace tablereader::preproc {

namespace {

double ink(std::uint8_t gray) { return (255.0 - gray) / 255.0; }

// Index range [first, last] of the plateau-free local maximum containing
// `peak`, walking outward while the profile stays at or above `floor`.
std::pair<int, int> line_extent(const std::vector<double>& values, int peak, double floor) {
  int first = peak;
  int last = peak;
  while (first > 0 && values[first - 1] >= floor) --first;
  while (last + 1 < static_cast<int>(values.size()) && values[last + 1] >= floor) ++last;
  return {first, last};
}

}  // namespace

Box enlarge_polygon(const FieldPolygon& poly, int margin, const Raster& page) {
  if (margin < 0) throw GeometryError("enlarge_polygon: margin must be >= 0");
  if (poly.vertices.size() < 3) throw GeometryError("field polygon needs at least 3 vertices");
  auto [min_x, max_x] = std::minmax_element(
      poly.vertices.begin(), poly.vertices.end(),
      [](const Point& a, const Point& b) { return a.x < b.x; });
  auto [min_y, max_y] = std::minmax_element(
      poly.vertices.begin(), poly.vertices.end(),
      [](const Point& a, const Point& b) { return a.y < b.y; });
  Box box{min_x->x - margin, min_y->y - margin, max_x->x + margin, max_y->y + margin};
  box.left = std::clamp(box.left, 0, page.width() - 1);
  box.right = std::clamp(box.right, 0, page.width() - 1);
  box.top = std::clamp(box.top, 0, page.height() - 1);
  box.bottom = std::clamp(box.bottom, 0, page.height() - 1);
  if (box.right <= box.left || box.bottom <= box.top)
    throw GeometryError("field polygon is degenerate after clamping to the page");
  return box;
}

ProfileVector projection_profile(const Raster& raster, Axis axis, const Box& region) {
  ProfileVector profile;
  profile.axis = axis;
  const int w = region.right - region.left + 1;
  const int h = region.bottom - region.top + 1;
  profile.values.assign(axis == Axis::kHorizontal ? h : w, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = ink(raster.at(region.left + x, region.top + y));
      profile.values[axis == Axis::kHorizontal ? y : x] += v;
    }
  }
  return profile;
}

ProfileVector projection_profile(const Raster& raster, Axis axis) {
  return projection_profile(raster, axis,
                            Box{0, 0, raster.width() - 1, raster.height() - 1});
}

std::vector<int> detect_table_lines(const ProfileVector& profile,
                                    const LineDetectParams& params) {
  if (params.smoothing_window < 1 || params.smoothing_window % 2 == 0)
    throw Error("detect_table_lines: smoothing window must be odd and >= 1");
  if (!(params.threshold_fraction > 0.0 && params.threshold_fraction <= 1.0))
    throw Error("detect_table_lines: threshold fraction must lie in (0, 1]");

  const auto& raw = profile.values;
  const int n = static_cast<int>(raw.size());
  const int half = params.smoothing_window / 2;
  std::vector<double> smooth(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    int count = 0;
    for (int k = std::max(0, i - half); k <= std::min(n - 1, i + half); ++k) {
      sum += raw[k];
      ++count;
    }
    smooth[i] = sum / count;
  }
  const double global_max = n ? *std::max_element(smooth.begin(), smooth.end()) : 0.0;
  if (global_max <= 0.0) return {};
  const double threshold = params.threshold_fraction * global_max;

  struct Candidate {
    int position;
    double strength;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < n;) {
    int j = i;
    while (j + 1 < n && smooth[j + 1] == smooth[i]) ++j;
    bool has_neighbor = i > 0 || j + 1 < n;
    bool left_lower = i == 0 || smooth[i - 1] < smooth[i];
    bool right_lower = j + 1 == n || smooth[j + 1] < smooth[i];
    if (has_neighbor && left_lower && right_lower && smooth[i] >= threshold) {
      // Snap to the strongest raw sample near the plateau.
      int lo = std::max(0, i - half);
      int hi = std::min(n - 1, j + half);
      int best = (i + j) / 2;
      for (int k = lo; k <= hi; ++k)
        if (raw[k] > raw[best]) best = k;
      candidates.push_back({best, smooth[i]});
    }
    i = j + 1;
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.strength > b.strength;
                   });
  std::vector<int> accepted;
  for (const Candidate& c : candidates) {
    bool clear = std::all_of(accepted.begin(), accepted.end(), [&](int p) {
      return std::abs(p - c.position) >= params.min_separation;
    });
    if (clear) accepted.push_back(c.position);
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

Raster cut_cell(const Raster& page, int left, int right, int top, int bottom) {
  if (left < 0 || top < 0 || right >= page.width() || bottom >= page.height())
    throw GeometryError("cut_cell: lines outside the page");
  if (left >= right || top >= bottom) throw GeometryError("cut_cell: lines out of order");
  const int w = right - left - 1;
  const int h = bottom - top - 1;
  if (w < 1 || h < 1) throw GeometryError("cut_cell: empty interior");
  Raster cell(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) cell.at(x, y) = page.at(left + 1 + x, top + 1 + y);
  return cell;
}

Raster normalize_height(const Raster& raster, int target_height) {
  if (target_height < 1) throw GeometryError("normalize_height: target must be >= 1");
  const double scale = static_cast<double>(raster.height()) / target_height;
  const int target_width =
      std::max(1, static_cast<int>(std::lround(raster.width() / scale)));
  const double scale_x = static_cast<double>(raster.width()) / target_width;
  Raster out(target_width, target_height);

  auto source = [](double pos, int extent) {
    return std::clamp(pos, 0.0, static_cast<double>(extent - 1));
  };
  for (int y = 0; y < target_height; ++y) {
    double sy = source((y + 0.5) * scale - 0.5, raster.height());
    int y0 = static_cast<int>(sy);
    int y1 = std::min(y0 + 1, raster.height() - 1);
    double fy = sy - y0;
    for (int x = 0; x < target_width; ++x) {
      double sx = source((x + 0.5) * scale_x - 0.5, raster.width());
      int x0 = static_cast<int>(sx);
      int x1 = std::min(x0 + 1, raster.width() - 1);
      double fx = sx - x0;
      double top = raster.at(x0, y0) * (1 - fx) + raster.at(x1, y0) * fx;
      double bottom = raster.at(x0, y1) * (1 - fx) + raster.at(x1, y1) * fx;
      double v = top * (1 - fy) + bottom * fy;
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

Raster normalize_contrast(const Raster& raster, const NormalizationSpec& spec) {
  if (raster.empty()) throw GeometryError("normalize_contrast: empty raster");
  if (!(0.0 <= spec.low_percentile && spec.low_percentile < spec.high_percentile &&
        spec.high_percentile <= 1.0))
    throw Error("normalize_contrast: percentiles must satisfy 0 <= low < high <= 1");
  if (spec.black_target >= spec.white_target)
    throw Error("normalize_contrast: black target must be below white target");

  std::vector<std::uint8_t> sorted = raster.pixels();
  std::sort(sorted.begin(), sorted.end());
  auto rank = [&](double p) {
    return sorted[static_cast<std::size_t>(std::lround(p * (sorted.size() - 1)))];
  };
  int lo = rank(spec.low_percentile);
  int hi = rank(spec.high_percentile);
  if (lo == hi) {
    // Sparse ink can hide entirely between the percentiles; use the extremes.
    lo = sorted.front();
    hi = sorted.back();
  }
  Raster out = raster;
  if (lo == hi) {
    std::fill(out.pixels().begin(), out.pixels().end(),
              static_cast<std::uint8_t>(spec.white_target));
    return out;
  }
  const double gain = static_cast<double>(spec.white_target - spec.black_target) / (hi - lo);
  for (auto& p : out.pixels()) {
    double v = (p - lo) * gain + spec.black_target;
    p = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return out;
}

CellBounds locate_cell(const Raster& page, const FieldPolygon& poly, int margin,
                       const LineDetectParams& params) {
  const Box box = enlarge_polygon(poly, margin, page);
  double cx = 0.0;
  double cy = 0.0;
  for (const Point& p : poly.vertices) {
    cx += p.x;
    cy += p.y;
  }
  cx /= poly.vertices.size();
  cy /= poly.vertices.size();

  // Each half of the box is searched on its own, so a faint rule on one side
  // is not thresholded against a heavy one on the other. Within a half the
  // strongest peak wins; handwriting strokes are weaker than a rule spanning
  // the whole box.
  auto refine = [&](Axis axis, int origin, double center, int low_edge, int high_edge) {
    const ProfileVector profile = projection_profile(page, axis, box);
    const int n = static_cast<int>(profile.values.size());
    const int split = std::clamp(static_cast<int>(std::ceil(center)) - origin, 0, n);
    auto strongest = [&](int from, int to) -> std::optional<int> {
      if (to - from < 2) return std::nullopt;
      ProfileVector part{{profile.values.begin() + from, profile.values.begin() + to}, axis};
      std::optional<int> best;
      for (int line : detect_table_lines(part, params))
        if (!best || part.values[line] > part.values[*best - from]) best = from + line;
      return best;
    };
    int before = low_edge;
    int after = high_edge;
    if (auto line = strongest(0, split))
      before = origin + line_extent(profile.values, *line, 0.5 * profile.values[*line]).second;
    if (auto line = strongest(split, n))
      after = origin + line_extent(profile.values, *line, 0.5 * profile.values[*line]).first;
    return std::pair{before, after};
  };

  auto [top, bottom] = refine(Axis::kHorizontal, box.top, cy, box.top, box.bottom);
  auto [left, right] = refine(Axis::kVertical, box.left, cx, box.left, box.right);
  return {left, right, top, bottom};
}

Raster extract_field(const Raster& page, const FieldPolygon& poly, int margin,
                     const LineDetectParams& params) {
  CellBounds b = locate_cell(page, poly, margin, params);
  Raster cell = cut_cell(page, b.left, b.right, b.top, b.bottom);
  NormalizationSpec spec;
  spec.target_height = default_input_height(poly.field_type);
  return normalize_contrast(normalize_height(cell, spec.target_height), spec);
}

}  // namespace tablereader::preproc
