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

#include <random>

#include "doctest.h"
#include "tablereader/preproc.hpp"

using namespace tablereader;
using namespace tablereader::preproc;

namespace {

FieldPolygon square(int x0, int y0, int x1, int y1) {
  return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, FieldType::kName};
}

Raster random_raster(int w, int h, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, 255);
  Raster r(w, h);
  for (auto& p : r.pixels()) p = static_cast<std::uint8_t>(d(rng));
  return r;
}

}  // namespace

TEST_CASE("enlarge_polygon") {
  Raster page(100, 100);
  CHECK(enlarge_polygon(square(0, 0, 10, 10), 0, page) == Box{0, 0, 10, 10});
  CHECK(enlarge_polygon(square(10, 10, 20, 20), 5, page) == Box{5, 5, 25, 25});

  // Triangle hugging the top-left corner: bounding box (3,4)-(30,12).
  FieldPolygon tri{{{3, 12}, {30, 4}, {15, 10}}, FieldType::kAge};
  CHECK(enlarge_polygon(tri, 20, page) == Box{0, 0, 50, 32});

  CHECK_THROWS_AS(enlarge_polygon(square(100, 100, 120, 120), 0, page), GeometryError);
  CHECK_THROWS_AS(enlarge_polygon(square(1, 1, 2, 2), -1, page), GeometryError);
  FieldPolygon two{{{0, 0}, {5, 5}}, FieldType::kAge};
  CHECK_THROWS_AS(enlarge_polygon(two, 0, page), GeometryError);
}

TEST_CASE("projection_profile") {
  Raster white(4, 4);
  CHECK(projection_profile(white, Axis::kHorizontal).values == std::vector<double>(4, 0.0));

  Raster row(4, 4);
  for (int x = 0; x < 4; ++x) row.at(x, 1) = 0;
  CHECK(projection_profile(row, Axis::kHorizontal).values ==
        std::vector<double>{0.0, 4.0, 0.0, 0.0});

  Raster dot(4, 4);
  dot.at(1, 2) = 0;
  CHECK(projection_profile(dot, Axis::kHorizontal).values ==
        std::vector<double>{0.0, 0.0, 1.0, 0.0});
  CHECK(projection_profile(dot, Axis::kVertical).values ==
        std::vector<double>{0.0, 1.0, 0.0, 0.0});
}

TEST_CASE("profile values stay within [0, orthogonal extent]") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Raster r = random_raster(3 + trial, 5 + trial / 2, rng);
    for (Axis axis : {Axis::kHorizontal, Axis::kVertical}) {
      auto p = projection_profile(r, axis);
      const double extent = axis == Axis::kHorizontal ? r.width() : r.height();
      CHECK(p.values.size() ==
            static_cast<std::size_t>(axis == Axis::kHorizontal ? r.height() : r.width()));
      for (double v : p.values) {
        CHECK(v >= 0.0);
        CHECK(v <= extent + 1e-12);
      }
    }
  }
}

TEST_CASE("detect_table_lines") {
  CHECK(detect_table_lines({std::vector<double>(100, 0.0)}).empty());
  CHECK(detect_table_lines({std::vector<double>(100, 3.0)}).empty());

  ProfileVector spikes{std::vector<double>(100, 0.0)};
  for (int i : {10, 50, 90}) spikes.values[i] = 100.0;
  CHECK(detect_table_lines(spikes, {5, 0.5, 8}) == std::vector<int>{10, 50, 90});

  ProfileVector close{std::vector<double>(60, 0.0)};
  close.values[20] = 100.0;
  close.values[23] = 60.0;
  CHECK(detect_table_lines(close, {5, 0.5, 5}) == std::vector<int>{20});

  CHECK_THROWS_AS(detect_table_lines(spikes, {4, 0.5, 8}), Error);
  CHECK_THROWS_AS(detect_table_lines(spikes, {5, 0.0, 8}), Error);
}

TEST_CASE("detected lines are ascending and respect the separation") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    ProfileVector p{std::vector<double>(200)};
    for (double& v : p.values) v = d(rng);
    const int sep = 3 + trial % 10;
    auto lines = detect_table_lines(p, {3, 0.3, sep});
    for (std::size_t i = 1; i < lines.size(); ++i) {
      CHECK(lines[i] > lines[i - 1]);
      CHECK(lines[i] - lines[i - 1] >= sep);
    }
  }
}

TEST_CASE("cut_cell excludes the line pixels") {
  Raster page(10, 10);
  page.at(2, 3) = 17;
  Raster c = cut_cell(page, 0, 5, 0, 5);
  CHECK(c.width() == 4);
  CHECK(c.height() == 4);
  CHECK(c.at(1, 2) == 17);

  Raster full = cut_cell(page, 0, 9, 0, 9);
  CHECK(full.width() == 8);
  CHECK(full.height() == 8);

  CHECK_THROWS_AS(cut_cell(page, 3, 4, 0, 9), GeometryError);
  CHECK_THROWS_AS(cut_cell(page, 5, 4, 0, 9), GeometryError);
  CHECK_THROWS_AS(cut_cell(page, 0, 10, 0, 9), GeometryError);
}

TEST_CASE("cut_cell on a ruled fixture returns the golden crop") {
  // 12x9 page with a frame at x=2, x=9, y=1, y=7 and a 2x2 blob inside.
  Raster page(12, 9);
  for (int y = 0; y < 9; ++y) page.at(2, y) = page.at(9, y) = 0;
  for (int x = 0; x < 12; ++x) page.at(x, 1) = page.at(x, 7) = 0;
  page.at(4, 3) = page.at(5, 3) = page.at(4, 4) = page.at(5, 4) = 50;
  Raster crop = cut_cell(page, 2, 9, 1, 7);
  Raster golden(6, 5);
  golden.at(1, 1) = golden.at(2, 1) = golden.at(1, 2) = golden.at(2, 2) = 50;
  CHECK(crop == golden);
}

TEST_CASE("normalize_height") {
  std::mt19937_64 rng(4);
  Raster r = random_raster(40, 128, rng);
  CHECK(normalize_height(r, 128) == r);

  Raster big(256, 512);
  Raster scaled = normalize_height(big, 128);
  CHECK(scaled.width() == 64);
  CHECK(scaled.height() == 128);

  Raster wide(512, 256);
  scaled = normalize_height(wide, 128);
  CHECK(scaled.width() == 256);
  CHECK(scaled.height() == 128);

  Raster sliver(1, 500);
  scaled = normalize_height(sliver, 96);
  CHECK(scaled.width() == 1);
  CHECK(scaled.height() == 96);

  CHECK(default_input_height(FieldType::kBirthplace) == 96);
  for (FieldType t : {FieldType::kName, FieldType::kRelation, FieldType::kAge,
                      FieldType::kMarital})
    CHECK(default_input_height(t) == 128);
}

TEST_CASE("normalize_contrast") {
  NormalizationSpec spec;
  Raster flat(5, 5, 99);
  Raster out = normalize_contrast(flat, spec);
  for (auto p : out.pixels()) CHECK(p == 255);

  Raster two(10, 10, 200);
  for (int x = 0; x < 10; ++x)
    for (int y = 0; y < 5; ++y) two.at(x, y) = 40;
  out = normalize_contrast(two, spec);
  for (int y = 0; y < 10; ++y) CHECK(out.at(3, y) == (y < 5 ? 0 : 255));
}

TEST_CASE("normalize_contrast is idempotent") {
  std::mt19937_64 rng(6);
  NormalizationSpec spec;
  for (int trial = 0; trial < 30; ++trial) {
    Raster r = random_raster(7 + trial, 9, rng);
    Raster once = normalize_contrast(r, spec);
    Raster twice = normalize_contrast(once, spec);
    for (std::size_t i = 0; i < once.pixels().size(); ++i)
      CHECK(std::abs(int(once.pixels()[i]) - int(twice.pixels()[i])) <= 1);
  }
}

TEST_CASE("sparse ink survives contrast normalization") {
  Raster r(100, 100, 230);
  r.at(50, 50) = 30;
  Raster out = normalize_contrast(r, {});
  CHECK(out.at(50, 50) == 0);
  CHECK(out.at(0, 0) == 255);
}

TEST_CASE("locate_cell snaps an offset polygon to the ruled frame") {
  Raster page(200, 120);
  for (int y = 0; y < 120; ++y)
    for (int x : {30, 31, 150}) page.at(x, y) = 0;
  for (int x = 0; x < 200; ++x)
    for (int y : {20, 80, 81}) page.at(x, y) = 0;
  // A little writing inside the cell.
  for (int x = 60; x < 100; ++x) page.at(x, 50) = 0;

  FieldPolygon poly = square(40, 28, 140, 72);
  CellBounds b = locate_cell(page, poly, 20);
  CHECK(b.left == 31);
  CHECK(b.right == 150);
  CHECK(b.top == 20);
  CHECK(b.bottom == 80);

  poly.field_type = FieldType::kBirthplace;
  Raster field = extract_field(page, poly, 20);
  CHECK(field.height() == 96);
}
