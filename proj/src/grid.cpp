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

#include "tablereader/grid.hpp"

#include <cmath>

#include "tablereader/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tablereader {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

FeatureGrid flip(const FeatureGrid& grid, bool flip_x, bool flip_y) {
  if (!flip_x && !flip_y) return grid;
  FeatureGrid out(grid.width(), grid.height(), grid.channels());
  for (int y = 0; y < grid.height(); ++y) {
    const int sy = flip_y ? grid.height() - 1 - y : y;
    for (int x = 0; x < grid.width(); ++x) {
      const int sx = flip_x ? grid.width() - 1 - x : x;
      auto src = grid.cell(sx, sy);
      auto dst = out.cell(x, y);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  }
  return out;
}

void require_finite(const FeatureGrid& grid, const std::string& where) {
  const auto& v = grid.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      const std::size_t cellno = i / grid.channels();
      throw NumericError("non-finite activation in " + where + " at x=" +
                         std::to_string(cellno % grid.width()) + " y=" +
                         std::to_string(cellno / grid.width()) + " channel=" +
                         std::to_string(i % grid.channels()));
    }
  }
}

}  // namespace tablereader
