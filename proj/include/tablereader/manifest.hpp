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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tablereader/field_type.hpp"
#include "tablereader/preproc.hpp"

namespace tablereader {

// One writing to read: an image (either an already cut field or a full page
// plus polygon), its column type and its transcript.
struct ManifestEntry {
  std::string image;
  FieldType field_type = FieldType::kName;
  std::string transcript;
  std::optional<preproc::FieldPolygon> polygon;
  std::string row_id;  // groups fields of one table row; optional

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  int dropped = 0;
  std::vector<std::string> drop_reasons;
};

// Tab-separated, '#' starts a comment line, blank lines ignored:
//
//   image<TAB>field_type<TAB>transcript[<TAB>polygon[<TAB>row_id]]
//
// polygon is "x1,y1 x2,y2 x3,y3 ..." or empty. Relative image paths are
// resolved against the manifest's directory. Transcripts are normalized with
// gt_normalize; rows with a missing image, an unknown field type or a
// transcript outside the field alphabet are dropped and counted.
// With require_transcripts false an empty transcript is kept (segmentation
// needs only the geometry); non-empty transcripts are still validated.
Manifest ingest_manifest(const std::filesystem::path& path, bool require_images = true,
                         bool require_transcripts = true);

// Parses the polygon column format above.
preproc::FieldPolygon parse_polygon(const std::string& text, FieldType type);

}  // namespace tablereader
