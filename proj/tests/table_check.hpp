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

// Line-recovery check on a synthetic ruled page, shared by the unit test and
// the acceptance binary.

#include <algorithm>
#include <cstdlib>

#include "tablereader/preproc.hpp"
#include "tablereader/synthetic.hpp"

namespace fixtures {

struct TableCheck {
  int edges_checked = 0;
  int cell_edge_error = 0;     // worst |located interior edge - true edge|
  int wrong_heights = 0;       // extracted cells not at the field's input height
};

inline TableCheck check_table(const tablereader::synthetic::TablePage& t) {
  using namespace tablereader;
  TableCheck c;
  for (const auto& cell : t.cells) {
    // locate_cell reports the innermost rule pixels; the interior starts one further in.
    const auto b = preproc::locate_cell(t.page, cell.polygon);
    for (int e : {b.left + 1 - cell.truth.left, b.right - 1 - cell.truth.right,
                  b.top + 1 - cell.truth.top, b.bottom - 1 - cell.truth.bottom}) {
      ++c.edges_checked;
      c.cell_edge_error = std::max(c.cell_edge_error, std::abs(e));
    }
    const Raster img = preproc::extract_field(t.page, cell.polygon);
    c.wrong_heights += img.height() != default_input_height(cell.field);
  }
  return c;
}

}  // namespace fixtures
