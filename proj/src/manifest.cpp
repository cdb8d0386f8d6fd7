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

#include "tablereader/manifest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tablereader/common.hpp"
#include "tablereader/fields.hpp"

namespace tablereader {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cols;
}

int parse_int(std::string_view s, const std::string& what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError("bad integer '" + std::string(s) + "' in " + what);
  return v;
}

}  // namespace

preproc::FieldPolygon parse_polygon(const std::string& text, FieldType type) {
  preproc::FieldPolygon poly;
  poly.field_type = type;
  std::istringstream in(text);
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw FormatError("polygon vertex '" + pair + "' is not x,y");
    poly.vertices.push_back({parse_int(std::string_view(pair).substr(0, comma), "polygon"),
                             parse_int(std::string_view(pair).substr(comma + 1), "polygon")});
  }
  if (poly.vertices.empty()) throw FormatError("empty polygon");
  return poly;
}

Manifest ingest_manifest(const std::filesystem::path& path, bool require_images,
                         bool require_transcripts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  const auto base = path.parent_path();
  Manifest manifest;
  std::string line;
  int lineno = 0;
  auto drop = [&](const std::string& why) {
    ++manifest.dropped;
    manifest.drop_reasons.push_back(path.string() + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() < 3) {
      drop("expected at least 3 columns");
      continue;
    }
    ManifestEntry e;
    if (cols[0].empty()) {
      drop("missing image");
      continue;
    }
    std::filesystem::path image(cols[0]);
    if (image.is_relative()) image = base / image;
    if (require_images && !std::filesystem::exists(image)) {
      drop("image not found: " + image.string());
      continue;
    }
    e.image = image.string();
    const auto type = parse_field_type(cols[1]);
    if (!type) {
      drop("unknown field type '" + cols[1] + "'");
      continue;
    }
    e.field_type = *type;
    try {
      e.transcript = gt_normalize(*type, cols[2]);
      if (e.transcript.empty() && require_transcripts) {
        drop("empty transcript");
        continue;
      }
      if (cols.size() > 3 && !cols[3].empty()) e.polygon = parse_polygon(cols[3], *type);
    } catch (const FormatError& err) {
      drop(err.what());
      continue;
    }
    if (cols.size() > 4) e.row_id = cols[4];
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

}  // namespace tablereader
