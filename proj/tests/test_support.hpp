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

#include <random>

#include "tablereader/network.hpp"

namespace support {

inline tablereader::NetworkSpec desk_spec(tablereader::StageKind recurrent =
                                              tablereader::StageKind::kLeaky) {
  using namespace tablereader;
  NetworkSpec spec;
  spec.name = "desk";
  spec.input_height = 16;
  spec.gabor = GaborBank{{0.0, 45.0, 90.0, 135.0}, 4.0, 2.0, 5};
  spec.stages = {{StageKind::kSubsample, 6, 4, 3},
                 {recurrent, 5, 1, 1},
                 {StageKind::kSubsample, 8, 4, 3},
                 {StageKind::kTanh, 6, 1, 1},
                 {recurrent, 4, 1, 1},
                 {StageKind::kCollapse, 0, 1, 1},
                 {StageKind::kSoftmax, 0, 1, 1}};
  spec.alphabet = Alphabet({"a", "b", "c", "d"}, "desk");
  spec.seed = 42;
  return spec;
}

inline tablereader::Raster random_raster(int w, int h, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, 255);
  tablereader::Raster r(w, h);
  for (auto& p : r.pixels()) p = static_cast<std::uint8_t>(d(rng));
  return r;
}

}  // namespace support
