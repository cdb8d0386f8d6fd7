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

#include <set>
#include <sstream>

#include "doctest.h"
#include "table_check.hpp"
#include "tablereader/synthetic.hpp"
#include "tablereader/training.hpp"

using namespace tablereader;
using namespace tablereader::synthetic;

TEST_CASE("table page: 50 rows, every line recovered within 2 px") {
  for (std::uint64_t seed : {1881u, 7u, 99u}) {
    TableOptions o;
    o.seed = seed;
    const TablePage t = make_table_page(o);
    REQUIRE(t.row_lines.size() == 51);
    REQUIRE(t.column_lines.size() == 6);
    REQUIRE(t.cells.size() == 250);
    const auto c = fixtures::check_table(t);
    CAPTURE(seed);
    CHECK(c.edges_checked == 1000);
    CHECK(c.cell_edge_error <= 2);
    CHECK(c.wrong_heights == 0);
  }
}

TEST_CASE("table page is a pure function of its options") {
  CHECK(make_table_page().page == make_table_page().page);
  TableOptions o;
  o.seed = 2;
  CHECK_FALSE(make_table_page(o).page == make_table_page().page);
  o.column_widths.pop_back();
  CHECK_THROWS_AS(make_table_page(o), Error);
}

TEST_CASE("toy task sizes and dictionary membership") {
  const ToyTask task = make_toy_task();
  CHECK(task.train.size() == 500);
  CHECK(task.validation.size() == 100);
  CHECK(task.dictionary.size() == 50);
  std::set<std::string> words;
  for (const auto& [w, c] : task.dictionary) {
    CHECK(c > 0);
    CHECK(w.size() >= 1);
    CHECK(w.size() <= 4);
    words.insert(w);
  }
  CHECK(words.size() == 50);
  for (const auto& w : task.validation_words) CHECK(words.count(w) == 1);
  for (std::size_t i = 0; i < task.train.size(); ++i) {
    CHECK(task.train[i].image.height() == kToyHeight);
    CHECK(task.train[i].labels.size() == task.train_words[i].size());
  }
}

TEST_CASE("toy words render with the requested height and grow with length") {
  std::mt19937_64 rng(3);
  const Raster one = render_toy_word("7", rng);
  const Raster four = render_toy_word("7777", rng);
  CHECK(one.height() == kToyHeight);
  CHECK(four.width() > 3 * one.width() / 2);
  CHECK_THROWS_AS(render_toy_word("7a", rng), Error);
}

TEST_CASE("toy network: training loss falls over a few epochs") {
  ToyOptions o;
  o.train = 100;
  o.validation = 20;
  const ToyTask task = make_toy_task(o);
  training::TrainConfig cfg;
  cfg.main_epochs = 6;
  cfg.samples_per_epoch = 100;
  cfg.batch_size = 1;
  cfg.seed = 5;
  std::vector<training::EpochRecord> history;
  training::TrainHooks hooks;
  hooks.on_epoch = [&](const training::EpochRecord& r) { history.push_back(r); };
  training::train(cfg, task.train, task.validation, toy_network_spec(), hooks);
  REQUIRE(history.size() == 7);
  CHECK(history.back().train_loss < 0.5 * history[1].train_loss);
  CHECK(history.back().validation_loss < 0.5 * history.front().validation_loss);
}
