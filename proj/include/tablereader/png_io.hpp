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

#include "tablereader/raster.hpp"

namespace tablereader {

// Reads any PNG and converts it to 8-bit gray (RGB is averaged with the
// usual luma weights by libpng; alpha is composited on white).
Raster read_png(const std::filesystem::path& path);

// Writes an 8-bit single-channel PNG.
void write_png(const Raster& raster, const std::filesystem::path& path);

}  // namespace tablereader
