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

#include "tablereader/png_io.hpp"

#include <png.h>

#include <cstring>

namespace tablereader {

Raster read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw FormatError("cannot read PNG " + path.string() + ": " + image.message);

  image.format = PNG_FORMAT_GRAY;
  png_color white{255, 255, 255};
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, &white, pixels.data(), 0, nullptr)) {
    std::string message = image.message;
    png_image_free(&image);
    throw FormatError("cannot decode PNG " + path.string() + ": " + message);
  }
  return Raster(static_cast<int>(image.width), static_cast<int>(image.height),
                std::move(pixels));
}

void write_png(const Raster& raster, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width());
  image.height = static_cast<png_uint_32>(raster.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, raster.pixels().data(), 0,
                               nullptr))
    throw FormatError("cannot write PNG " + path.string() + ": " + image.message);
}

}  // namespace tablereader
