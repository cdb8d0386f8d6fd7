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

#include <stdexcept>
#include <string>

namespace tablereader {

// Base for every error raised by the library. Callers that only need a
// one-line diagnostic can catch this and print what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files: manifests, dictionaries, descriptors, checkpoints.
class FormatError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf reached somewhere it must not.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Geometry that leaves nothing to work with (empty crop, zero-area polygon).
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace tablereader
