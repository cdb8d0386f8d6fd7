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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// all pass. Oracles come from the test-only headers, never from the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "decode_fixtures.hpp"
#include "oracles.hpp"
#include "table_check.hpp"
#include "tablereader/checkpoint.hpp"
#include "tablereader/consistency.hpp"
#include "tablereader/ctc.hpp"
#include "tablereader/decode.hpp"
#include "tablereader/decode_config.hpp"
#include "tablereader/dictionary.hpp"
#include "tablereader/gradcheck.hpp"
#include "tablereader/synthetic.hpp"
#include "tablereader/training.hpp"

using namespace tablereader;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Dictionary dict_of(const std::vector<std::pair<std::string, double>>& words) {
  return Dictionary(words, fixtures::abcd());
}

// ------------------------------------------------------------------------ 1

Verdict ctc_oracle() {
  std::mt19937_64 rng(20140901);
  std::uniform_int_distribution<int> tdist(1, 6), kdist(2, 5), ldist(1, 3);
  double worst = 0.0;
  int infeasible = 0;
  bool ok = true;
  for (int c = 0; c < 200; ++c) {
    const int T = tdist(rng);
    const int K = kdist(rng);
    const auto m = oracle::random_matrix(T, K, rng);
    std::uniform_int_distribution<int> sym(0, K - 2);
    std::vector<int> w(static_cast<std::size_t>(ldist(rng)));
    for (int& s : w) s = sym(rng);
    const double brute = oracle::brute_force_prob(m, w);
    const double nlp = ctc::neg_log_prob(m, w);
    if (brute == 0.0) {
      ++infeasible;
      ok = ok && nlp == ctc::kInfeasible;
      continue;
    }
    const double err = std::abs(std::exp(-nlp) - brute);
    worst = std::max(worst, err);
  }
  ok = ok && worst <= 1e-10;
  return {ok, fmt("200 cases (%.0f infeasible), max |p - p_brute| = %.2e (limit 1e-10)",
                  infeasible, worst)};
}

// ------------------------------------------------------------------------ 2

Verdict gradient_fidelity() {
  std::ostringstream detail;
  bool ok = true;
  for (StageKind cell : {StageKind::kLeaky, StageKind::kMdlstm}) {
    const NetworkSpec spec = synthetic::desk_spec(cell);
    const Network net(spec);
    std::mt19937_64 rng(cell == StageKind::kLeaky ? 31 : 32);
    Raster img(40, spec.input_height);
    std::uniform_int_distribution<int> pix(0, 255);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(pix(rng));
    GradCheckOptions opts;  // 200 samples, tolerance 1e-4
    const auto r = gradient_check(net, net.initialize(), img, {0, 2, 1}, opts);
    ok = ok && r.samples.size() == 200 && r.pass_fraction >= 0.99;
    detail << (cell == StageKind::kLeaky ? "leaky: " : "; mdlstm: ")
           << fmt("%.1f%% of %.0f within 1e-4 (max %.1e)", r.pass_fraction * 100.0,
                  static_cast<double>(r.samples.size()), r.max_relative_error);
  }
  return {ok, detail.str()};
}

// ------------------------------------------------------------------------ 3

Verdict decoding_exactness() {
  std::mt19937_64 rng(3303);
  int mismatches = 0;
  int with_ties = 0;
  std::size_t largest = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = fixtures::make_fixture(rng, 1000, 3, trial % 3 == 0);
    const Dictionary dict = dict_of(f.words);
    largest = std::max(largest, dict.size());
    const auto costs = fixtures::oracle_costs(f);
    const auto want = fixtures::oracle_best(costs);
    const auto got = decode::committee_best(f.committee, dict, f.params);
    if (want) {
      int at_min = 0;
      for (const auto& c : costs) at_min += fixtures::near(c.cost, want->cost);
      with_ties += at_min > 1;
    }
    if (want.has_value() != got.has_value() ||
        (want && (got->word != want->word || got->member != want->member))) {
      ++mismatches;
      continue;
    }
    fixtures::DecodeFixture one = f;
    one.committee.resize(1);
    const auto w1 = fixtures::oracle_best(fixtures::oracle_costs(one));
    const auto g1 = decode::best_word(f.committee[0], dict, f.params);
    if (w1.has_value() != g1.has_value() || (w1 && g1->word != w1->word)) ++mismatches;
  }
  return {mismatches == 0 && with_ties > 0,
          fmt("50 fixtures (largest dictionary %.0f), %.0f with exact ties, %.0f mismatches",
              static_cast<double>(largest), with_ties, mismatches)};
}

// ------------------------------------------------------------------------ 4

Verdict scoring_algebra() {
  std::mt19937_64 rng(4404);
  const int trials = 100;
  int scaling_fail = 0, beta_fail = 0, single_fail = 0;
  for (int t = 0; t < trials; ++t) {
    // Multiplying every count by s > 0 keeps the full ranking.
    auto f = fixtures::make_fixture(rng, 80, 2, false);
    const auto a = decode::top_k(f.committee, dict_of(f.words), f.params, f.words.size());
    const double s = 1.0 + static_cast<double>(rng() % 1000) / 7.0;
    for (auto& [w, c] : f.words) c *= s;
    const auto b = decode::top_k(f.committee, dict_of(f.words), f.params, f.words.size());
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].word == b[i].word;
    scaling_fail += !same;

    // With beta = 0 the counts do not matter.
    auto g = fixtures::make_fixture(rng, 80, 2, false);
    g.params.beta = 0.0;
    const auto before = decode::committee_best(g.committee, dict_of(g.words), g.params);
    for (auto& [w, c] : g.words) c = static_cast<double>(rng() % 1000);
    beta_fail += !(before == decode::committee_best(g.committee, dict_of(g.words), g.params));

    // A committee of one is the single network.
    const auto h = fixtures::make_fixture(rng, 80, 1, t % 2 == 0);
    const auto d = dict_of(h.words);
    single_fail += !(decode::committee_best({h.committee[0]}, d, h.params) ==
                     decode::best_word(h.committee[0], d, h.params));
  }
  return {scaling_fail + beta_fail + single_fail == 0,
          fmt("%.0f trials each; failures: scaling %.0f, beta=0 %.0f, |I|=1 %.0f", trials,
              scaling_fail, beta_fail, single_fail)};
}

// ------------------------------------------------------------------------ 5

Verdict toy_learning() {
  const synthetic::ToyTask task = synthetic::make_toy_task();  // fixed seed
  const NetworkSpec spec = synthetic::toy_network_spec();
  training::TrainConfig cfg;
  cfg.main_epochs = 20;
  cfg.post_epochs = 5;
  cfg.main_lr = 0.002;
  cfg.post_lr = 0.001;
  cfg.momentum = 0.9;
  cfg.samples_per_epoch = 500;
  cfg.batch_size = 1;
  cfg.seed = 2014;
  const auto cp = training::train(cfg, task.train, task.validation, spec);
  const double initial = cp.history.front().validation_loss;
  const double final_loss = cp.history.back().validation_loss;

  const Network net(spec);
  const Dictionary dict(task.dictionary, synthetic::toy_alphabet());
  int correct = 0;
  for (std::size_t i = 0; i < task.validation.size(); ++i) {
    const auto best = decode::best_word(net.forward(cp.weights, task.validation[i].image), dict,
                                        {0.0, 0.0});
    correct += best && best->word == task.validation_words[i];
  }
  const double acc = static_cast<double>(correct) / static_cast<double>(task.validation.size());
  const double ratio = final_loss / initial;
  return {ratio < 0.2 && acc >= 0.9,
          fmt("validation loss %.3f -> %.4f (%.2f%% of initial, limit 20%%), accuracy %.1f%% "
              "(limit 90%%)",
              initial, final_loss, ratio * 100.0, acc * 100.0)};
}

// ------------------------------------------------------------------------ 6

Verdict configuration_fidelity() {
  const std::filesystem::path dir = TABLEREADER_CONFIG_DIR;
  const auto table = decode::DecodingTable::load(dir / "decoding.json");
  struct Want {
    FieldType type;
    int outputs;
    std::size_t committee;
    decode::DecodeParams params;
  };
  const std::vector<Want> want = {{FieldType::kName, 56, 3, {0.50, 0.50}},
                                  {FieldType::kRelation, 56, 2, {1.00, 0.00}},
                                  {FieldType::kAge, 25, 1, {0.75, 0.25}},
                                  {FieldType::kMarital, 7, 1, {0.75, 0.25}},
                                  {FieldType::kBirthplace, 55, 2, {1.00, 0.00}}};
  std::string got_outputs, got_sizes;
  bool ok = table.name_params().given == decode::DecodeParams{0.25, 0.25} &&
            table.name_params().family == decode::DecodeParams{0.50, 0.50};
  for (const auto& w : want) {
    const auto& f = table.at(w.type);
    ok = ok && f.committee_size() == w.committee && f.params == w.params;
    got_sizes += std::to_string(f.committee_size()) + " ";
    // Every network of the committee must agree on the output layer.
    int outputs = -1;
    for (const auto& path : f.networks) {
      const Network net(NetworkSpec::load(path.string()));
      ok = ok && (outputs < 0 || outputs == net.output_neurons());
      outputs = net.output_neurons();
    }
    ok = ok && outputs == w.outputs;
    got_outputs += std::to_string(outputs) + " ";
  }
  return {ok, "outputs " + got_outputs + "(want 56 56 25 7 55), committees " + got_sizes +
                  "(want 3 2 1 1 2), NAME split 0.50/0.50 + 0.25/0.25"};
}

// ------------------------------------------------------------------------ 7

Verdict segmentation() {
  const auto page = synthetic::make_table_page();
  const auto c = fixtures::check_table(page);
  return {c.cell_edge_error <= 2 && c.wrong_heights == 0 && c.edges_checked == 1000,
          fmt("50 rows, %.0f cell edges, worst error %.0f px (limit 2), %.0f crops at the wrong "
              "height",
              c.edges_checked, c.cell_edge_error, c.wrong_heights)};
}

// ------------------------------------------------------------------------ 8

Verdict consistency_scenario() {
  using namespace consistency;
  GenderLexicon lex;
  lex.add("John", 'm');
  lex.add("Joan", 'f');
  const ConsistencyRule rule{"wife-female", "wife", 'f', kGivenField, kDefaultPenalty,
                             kDefaultMargin};
  auto row = [](double john, double joan) {
    Row r;
    r.id = "1";
    r.fields[kRelationField] = {{{"Wife", 1.0, 0, 0}, {"Head", 6.0, 0, 1}}, 0};
    r.fields[kGivenField] = {{{"John", john, 0, 0}, {"Joan", joan, 0, 1}}, 0};
    return r;
  };
  // gamma = 1: Joan at +0.6 is taken, at +1.4 it is not.
  const auto inside = apply_consistency(row(3.0, 3.6), {rule}, lex);
  const auto outside = apply_consistency(row(3.0, 4.4), {rule}, lex);
  const std::string a = inside.row.fields.at(kGivenField).current().word;
  const std::string b = outside.row.fields.at(kGivenField).current().word;
  const bool logged = outside.log.size() == 1 && !outside.log[0].switched;
  return {a == "Joan" && b == "John" && logged,
          "Wife + John (delta 2, gamma 1): alternative +0.6 -> " + a + ", alternative +1.4 -> " + b +
              (logged ? " (kept, logged)" : " (no log entry)")};
}

// ------------------------------------------------------------------------ 9

Verdict checkpoint_round_trip() {
  const NetworkSpec spec = synthetic::desk_spec(StageKind::kMdlstm);
  std::mt19937_64 rng(9);
  std::vector<training::Sample> data;
  for (int i = 0; i < 4; ++i) {
    Raster img(36, spec.input_height);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng() % 256);
    data.push_back({img, {static_cast<int>(i % 4)}});
  }
  training::TrainConfig cfg;
  cfg.main_epochs = 1;
  cfg.samples_per_epoch = 4;
  cfg.batch_size = 2;
  const auto cp = training::train(cfg, data, data, spec);

  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = dir / "tablereader_acceptance_1.ctrw";
  const auto p2 = dir / "tablereader_acceptance_2.ctrw";
  training::save_checkpoint(cp, p1);
  training::save_checkpoint(training::load_checkpoint(p1), p2);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string s1 = slurp(p1);
  const bool identical = !s1.empty() && s1 == slurp(p2);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);

  int rejected = 0;
  const auto bytes = training::serialize_checkpoint(cp);
  for (std::size_t at : {bytes.size() - 1, bytes.size() / 2}) {
    auto bad = bytes;
    bad[at] ^= 0x10;
    try {
      training::deserialize_checkpoint(bad);
    } catch (const FormatError& e) {
      rejected += std::string(e.what()).find("checksum") != std::string::npos;
    }
  }
  return {identical && rejected == 2,
          std::to_string(s1.size()) + " bytes, save-load-save " +
              (identical ? "identical" : "DIFFERS") + "; corrupted checksum and payload rejected " +
              std::to_string(rejected) + "/2"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "CTC oracle equivalence", 30, ctc_oracle},
      {2, "gradient fidelity", 120, gradient_fidelity},
      {3, "decoding exactness", 60, decoding_exactness},
      {4, "scoring algebra", 0, scoring_algebra},
      {5, "toy end-to-end learning", 600, toy_learning},
      {6, "configuration fidelity", 0, configuration_fidelity},
      {7, "segmentation fixture", 30, segmentation},
      {8, "consistency postprocessing", 0, consistency_scenario},
      {9, "checkpoint round trip", 0, checkpoint_round_trip},
  };
  // Optional criterion numbers on the command line select a subset.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      v.pass = false;
      v.detail += fmt("; over the %.0f s limit", c.time_limit_s);
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << v.detail
              << fmt(" [%.2f s]", secs) << std::endl;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criterion(s) failed"
                       : std::string("acceptance: all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
