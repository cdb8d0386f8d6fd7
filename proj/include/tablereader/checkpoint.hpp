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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tablereader/training.hpp"

namespace tablereader::training {

inline constexpr char kCheckpointMagic[4] = {'C', 'T', 'R', 'W'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (all integers little-endian):
//   "CTRW" | u32 version | u32 n | n bytes UTF-8 JSON header
//   | f64 weights, layer by layer in descriptor order
//   | f64 velocities, same order
//   | u32 CRC-32 of every preceding byte
// The JSON header carries the network descriptor under "spec" plus the
// training config, epoch counter and loss history.
std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& cp);
Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

// Writes through a temporary file and renames, so a crash never leaves a
// truncated checkpoint behind.
void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace tablereader::training
