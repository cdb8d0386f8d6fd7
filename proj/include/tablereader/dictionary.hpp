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
#include <string>
#include <utility>
#include <vector>

#include "tablereader/alphabet.hpp"

namespace tablereader {

struct DictionaryEntry {
  std::string word;
  LabelSequence labels;
  double count = 0.0;
};

// Word list with relative frequencies p(w). Counts are smoothed with a
// pseudo-count equal to the smallest positive count (1 for an all-zero
// list), so every p(w) > 0. For integer counts whose minimum is 1 this is
// add-one smoothing; scaling all counts by a constant leaves p(w) unchanged.
class Dictionary {
 public:
  Dictionary() = default;
  Dictionary(const std::vector<std::pair<std::string, double>>& words,
             const Alphabet& alphabet);

  // "count<TAB>word" per line, '#' comment lines and blank lines skipped.
  // Words outside the alphabet throw FormatError naming the line.
  static Dictionary load(const std::filesystem::path& path, const Alphabet& alphabet);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const DictionaryEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<DictionaryEntry>& entries() const { return entries_; }
  const Alphabet& alphabet() const { return alphabet_; }

  double prior(std::size_t i) const;
  double log_prior(std::size_t i) const { return log_priors_[i]; }

  // The `m` most frequent entries (ties by word), re-smoothed as their own list.
  Dictionary most_frequent(std::size_t m) const;

 private:
  Alphabet alphabet_;
  std::vector<DictionaryEntry> entries_;
  std::vector<double> log_priors_;
};

}  // namespace tablereader
