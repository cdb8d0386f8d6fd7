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

#include "tablereader/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tablereader/checkpoint.hpp"
#include "tablereader/common.hpp"
#include "tablereader/consistency.hpp"
#include "tablereader/ctc.hpp"
#include "tablereader/decode.hpp"
#include "tablereader/decode_config.hpp"
#include "tablereader/dictionary.hpp"
#include "tablereader/fields.hpp"
#include "tablereader/gradcheck.hpp"
#include "tablereader/manifest.hpp"
#include "tablereader/png_io.hpp"
#include "tablereader/preproc.hpp"
#include "tablereader/synthetic.hpp"
#include "tablereader/training.hpp"

namespace tablereader::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Runs fn(i) for i in [0, n) across threads; the first exception (by index)
// is rethrown after the loop.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Field crop at the network's input height. Page entries go through the
// full segmentation pipeline; crops are height- and contrast-normalized.
Raster prepare_image(const ManifestEntry& e, int height) {
  const Raster img = read_png(e.image);
  if (e.polygon) {
    Raster cell = preproc::extract_field(img, *e.polygon);
    return cell.height() == height ? cell : preproc::normalize_height(cell, height);
  }
  preproc::NormalizationSpec spec;
  spec.target_height = height;
  return preproc::normalize_contrast(preproc::normalize_height(img, height), spec);
}

std::string row_key(const ManifestEntry& e, std::size_t index) {
  return e.row_id.empty() ? std::to_string(index + 1) : e.row_id;
}

std::string format_cost(double c) {
  if (!std::isfinite(c)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << c;
  return os.str();
}

FieldType require_field(const std::string& text) {
  const auto t = parse_field_type(text);
  if (!t) throw Error("unknown field type '" + text + "'");
  return *t;
}

// ------------------------------------------------------------------ segment

struct SegmentArgs {
  std::string manifest;
  std::string out;
  std::optional<int> height;
};

int run_segment(const SegmentArgs& a, std::ostream& out, std::ostream& err) {
  const Manifest m = ingest_manifest(a.manifest, true, false);
  for (const auto& why : m.drop_reasons) err << "dropped: " << why << '\n';
  fs::create_directories(a.out);
  std::vector<std::string> names(m.entries.size());
  parallel_for(m.entries.size(), [&](std::size_t i) {
    const auto& e = m.entries[i];
    const int h = a.height.value_or(default_input_height(e.field_type));
    std::ostringstream name;
    name << std::setw(5) << std::setfill('0') << i + 1 << '_' << to_string(e.field_type) << ".png";
    names[i] = name.str();
    write_png(prepare_image(e, h), fs::path(a.out) / names[i]);
  });
  std::ofstream list(fs::path(a.out) / "manifest.tsv");
  list << "# image\tfield\ttranscript\tpolygon\trow_id\n";
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    list << names[i] << '\t' << to_string(e.field_type) << '\t' << e.transcript << "\t\t"
         << row_key(e, i) << '\n';
  }
  out << "segmented " << m.entries.size() << " field(s), dropped " << m.dropped << '\n';
  return 0;
}

// -------------------------------------------------------------------- train

struct TrainArgs {
  std::string config;
  std::string manifest;
  std::string validation_manifest;
  std::string out;
  std::string resume;
  std::string log;
  std::string split = "10:1";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> precision;
  std::optional<int> main_epochs;
  std::optional<int> post_epochs;
  std::optional<int> samples_per_epoch;
  std::optional<int> batch_size;
  std::optional<double> main_lr;
  std::optional<double> post_lr;
  std::optional<double> momentum;
};

std::vector<training::Sample> load_samples(const std::vector<ManifestEntry>& entries,
                                           const NetworkSpec& spec) {
  std::vector<training::Sample> samples(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) {
    samples[i].image = prepare_image(entries[i], spec.input_height);
    samples[i].labels = spec.alphabet.tokenize(entries[i].transcript);
  });
  return samples;
}

std::vector<ManifestEntry> of_field(std::vector<ManifestEntry> entries,
                                    std::optional<FieldType> field) {
  if (!field) return entries;
  std::erase_if(entries, [&](const ManifestEntry& e) { return e.field_type != *field; });
  return entries;
}

int run_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.config);
  if (!in) throw Error("cannot open config " + a.config);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(a.config + ": " + e.what());
  }
  NetworkSpec spec = NetworkSpec::from_json(doc);
  training::TrainConfig cfg =
      doc.contains("training") ? training::TrainConfig::from_json(doc["training"]) : training::TrainConfig{};

  // Flags (and their environment variables) override the file.
  if (a.seed) cfg.seed = spec.seed = *a.seed;
  if (a.precision) {
    if (*a.precision == "double") cfg.precision = training::Precision::kDouble;
    else if (*a.precision == "single") cfg.precision = training::Precision::kSingle;
    else throw Error("--precision must be single or double");
  }
  if (a.main_epochs) cfg.main_epochs = *a.main_epochs;
  if (a.post_epochs) cfg.post_epochs = *a.post_epochs;
  if (a.samples_per_epoch) cfg.samples_per_epoch = *a.samples_per_epoch;
  if (a.batch_size) cfg.batch_size = *a.batch_size;
  if (a.main_lr) cfg.main_lr = *a.main_lr;
  if (a.post_lr) cfg.post_lr = *a.post_lr;
  if (a.momentum) cfg.momentum = *a.momentum;
  cfg.validate();
  if (cfg.precision == training::Precision::kSingle)
    throw Error("single-precision training is not available in this build; use --precision double");

  const Manifest m = ingest_manifest(a.manifest);
  for (const auto& why : m.drop_reasons) err << "dropped: " << why << '\n';
  std::vector<ManifestEntry> train_entries;
  std::vector<ManifestEntry> val_entries;
  if (!a.validation_manifest.empty()) {
    train_entries = of_field(m.entries, spec.field_type);
    const Manifest v = ingest_manifest(a.validation_manifest);
    val_entries = of_field(v.entries, spec.field_type);
  } else {
    const auto colon = a.split.find(':');
    if (colon == std::string::npos) throw Error("--split must look like 10:1");
    const auto split = training::split_dataset(of_field(m.entries, spec.field_type),
                                               std::stoi(a.split.substr(0, colon)),
                                               std::stoi(a.split.substr(colon + 1)), cfg.seed);
    train_entries = split.train;
    val_entries = split.validation;
  }
  if (train_entries.empty()) throw Error("no training entries for this network");
  out << "train " << train_entries.size() << ", validation " << val_entries.size() << ", "
      << Network(spec).trainable_count() << " trainable weights\n";

  const auto train_set = load_samples(train_entries, spec);
  const auto val_set = load_samples(val_entries, spec);

  std::ofstream log_file;
  training::TrainHooks hooks;
  hooks.checkpoint_path = a.out;
  if (!a.log.empty()) {
    log_file.open(a.log);
    if (!log_file) throw Error("cannot write log " + a.log);
    hooks.log = &log_file;
  } else {
    hooks.log = &out;
  }
  std::optional<training::Checkpoint> resume;
  if (!a.resume.empty()) resume = training::load_checkpoint(a.resume);
  const auto cp = training::train(cfg, train_set, val_set, spec, hooks, std::move(resume));
  out << "wrote " << a.out << " after epoch " << cp.epoch << '\n';
  return 0;
}

// ------------------------------------------------------------------- decode

struct DecodeArgs {
  std::vector<std::string> committee;
  std::vector<std::string> dicts;
  std::string given_dict;
  std::string manifest;
  std::string config;
  std::string rules;
  std::string lexicon;
  std::string out;
  std::optional<std::string> field_type;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> given_alpha;
  std::optional<double> given_beta;
  bool resolve_ditto = false;
};

struct Member {
  std::unique_ptr<Network> net;
  WeightStore weights;
};

struct FieldResult {
  bool present = false;
  std::string answer;
  double cost = ctc::kInfeasible;
  int member = -1;
  std::vector<decode::ScoredWord> alternatives;  // RELATION: words; NAME: given names
  std::string family;                            // NAME only
};

int run_decode(const DecodeArgs& a, std::ostream& out, std::ostream& err) {
  const std::optional<FieldType> only =
      a.field_type ? std::optional(require_field(*a.field_type)) : std::nullopt;
  const decode::DecodingTable table =
      a.config.empty() ? decode::DecodingTable::defaults() : decode::DecodingTable::load(a.config);

  // Committees grouped by the field each checkpoint was trained for.
  std::map<FieldType, std::vector<Member>> committees;
  for (const auto& path : a.committee) {
    auto cp = training::load_checkpoint(path);
    const auto field = cp.spec.field_type ? *cp.spec.field_type : only.value_or(FieldType::kName);
    if (!cp.spec.field_type && !only)
      throw Error(path + ": checkpoint has no field type; pass --field-type");
    auto& c = committees[field];
    if (!c.empty() && !(c.front().net->spec().alphabet == cp.spec.alphabet))
      throw Error(path + ": alphabet differs from the rest of the committee");
    if (!c.empty() && c.front().net->spec().input_height != cp.spec.input_height)
      throw Error(path + ": input height differs from the rest of the committee");
    c.push_back({std::make_unique<Network>(cp.spec), std::move(cp.weights)});
  }
  for (const auto& [field, c] : committees) {
    err << to_string(field) << ": committee of " << c.size() << " network(s)";
    const auto it = table.fields.find(field);
    if (it != table.fields.end() && it->second.committee_size() != c.size())
      err << " (table lists " << it->second.committee_size() << ")";
    err << '\n';
  }

  // Dictionaries: "FIELD=PATH", "GIVEN=PATH", or a bare path for the only field.
  std::map<std::string, std::string> dict_paths;
  for (const auto& d : a.dicts) {
    const auto eq = d.find('=');
    if (eq != std::string::npos) {
      const std::string key = d.substr(0, eq);
      dict_paths[key == "GIVEN" ? key : std::string(to_string(require_field(key)))] = d.substr(eq + 1);
    } else {
      std::optional<FieldType> f = only;
      if (!f && committees.size() == 1) f = committees.begin()->first;
      if (!f) throw Error("--dict " + d + ": prefix with FIELD= when decoding several fields");
      dict_paths[std::string(to_string(*f))] = d;
    }
  }
  if (!a.given_dict.empty()) dict_paths["GIVEN"] = a.given_dict;

  std::map<FieldType, Dictionary> dicts;
  std::optional<Dictionary> given;
  for (const auto& [field, c] : committees) {
    const auto key = std::string(to_string(field));
    const auto it = dict_paths.find(key);
    if (it == dict_paths.end()) throw Error("no dictionary for " + key);
    dicts.emplace(field, Dictionary::load(it->second, c.front().net->spec().alphabet));
    if (field == FieldType::kName) {
      const auto g = dict_paths.find("GIVEN");
      if (g == dict_paths.end()) throw Error("NAME needs a given-name dictionary (--given-dict)");
      given = Dictionary::load(g->second, c.front().net->spec().alphabet);
    }
  }

  auto params_for = [&](FieldType f) {
    decode::DecodeParams p = table.at(f).params;
    if (a.alpha) p.alpha = *a.alpha;
    if (a.beta) p.beta = *a.beta;
    return p;
  };
  decode::NameDecodeParams name_params = table.name_params();
  if (a.alpha) name_params.family.alpha = *a.alpha;
  if (a.beta) name_params.family.beta = *a.beta;
  if (a.given_alpha) name_params.given.alpha = *a.given_alpha;
  if (a.given_beta) name_params.given.beta = *a.given_beta;

  const Manifest m = ingest_manifest(a.manifest, true, false);
  for (const auto& why : m.drop_reasons) err << "dropped: " << why << '\n';
  const bool with_rules = !a.rules.empty();
  const std::size_t k = with_rules ? 10 : 1;

  std::vector<FieldResult> results(m.entries.size());
  parallel_for(m.entries.size(), [&](std::size_t i) {
    const auto& e = m.entries[i];
    if (only && e.field_type != *only) return;
    const auto c = committees.find(e.field_type);
    if (c == committees.end()) return;
    const Raster img = prepare_image(e, c->second.front().net->spec().input_height);
    decode::Committee outputs;
    for (const auto& member : c->second)
      outputs.push_back(member.net->forward(member.weights, img, nullptr, Execution::kSerial));
    FieldResult& r = results[i];
    r.present = true;
    if (e.field_type == FieldType::kName) {
      const int space = c->second.front().net->spec().alphabet.index_of(" ");
      const auto top = decode::name_top_k(outputs, dicts.at(FieldType::kName), *given, space,
                                          name_params, k, Execution::kSerial);
      if (top.empty()) return;
      r.family = top.front().family.word;
      r.answer = r.family + " " + top.front().given.word;
      r.cost = top.front().cost;
      r.member = top.front().member;
      for (const auto& n : top)
        if (n.family.word == r.family) r.alternatives.push_back({n.given.word, n.cost, n.member, n.given.entry});
    } else {
      auto top = decode::top_k(outputs, dicts.at(e.field_type), params_for(e.field_type), k,
                               Execution::kSerial);
      std::erase_if(top, [](const decode::ScoredWord& w) { return !std::isfinite(w.cost); });
      if (top.empty()) return;
      r.answer = top.front().word;
      r.cost = top.front().cost;
      r.member = top.front().member;
      r.alternatives = std::move(top);
    }
  });

  if (with_rules) {
    if (a.lexicon.empty()) throw Error("--rules needs --lexicon");
    const auto rules = consistency::load_rules(a.rules);
    const auto lexicon = consistency::GenderLexicon::load(a.lexicon);
    std::map<std::string, std::pair<long, long>> rows;  // row -> (name index, relation index)
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
      if (!results[i].present || results[i].alternatives.empty()) continue;
      auto [it, fresh] = rows.try_emplace(row_key(m.entries[i], i), -1, -1);
      if (m.entries[i].field_type == FieldType::kName) it->second.first = static_cast<long>(i);
      if (m.entries[i].field_type == FieldType::kRelation) it->second.second = static_cast<long>(i);
    }
    for (const auto& [id, idx] : rows) {
      if (idx.first < 0 || idx.second < 0) continue;
      auto& name = results[static_cast<std::size_t>(idx.first)];
      auto& relation = results[static_cast<std::size_t>(idx.second)];
      consistency::Row row;
      row.id = id;
      row.fields[consistency::kGivenField] = {name.alternatives, 0};
      row.fields[consistency::kRelationField] = {relation.alternatives, 0};
      const auto outcome = consistency::apply_consistency(row, rules, lexicon);
      for (const auto& ev : outcome.log)
        err << "consistency\t" << ev.rule_id << '\t' << ev.row_id << '\t' << ev.field << '\t'
            << (ev.switched ? "switched" : "kept") << '\t' << ev.from << '\t' << ev.to << '\n';
      const auto& g = outcome.row.fields.at(consistency::kGivenField).current();
      name.answer = name.family + " " + g.word;
      name.cost = g.cost;
      name.member = g.member;
      const auto& rel = outcome.row.fields.at(consistency::kRelationField).current();
      relation.answer = rel.word;
      relation.cost = rel.cost;
      relation.member = rel.member;
    }
  }

  if (a.resolve_ditto) {
    std::vector<std::string> families;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < m.entries.size(); ++i)
      if (results[i].present && m.entries[i].field_type == FieldType::kName && !results[i].family.empty()) {
        families.push_back(results[i].family);
        where.push_back(i);
      }
    const auto resolved = decode::normalize_family_ditto(families);
    for (std::size_t j = 0; j < where.size(); ++j) {
      auto& r = results[where[j]];
      if (resolved[j].unresolved) err << "unresolved ditto mark in row " << row_key(m.entries[where[j]], where[j]) << '\n';
      r.answer = resolved[j].family + r.answer.substr(r.family.size());
    }
  }

  std::ofstream file;
  std::ostream* dst = &out;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw Error("cannot write " + a.out);
    dst = &file;
  }
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& r = results[i];
    if (!r.present) continue;
    *dst << row_key(m.entries[i], i) << '\t' << to_string(m.entries[i].field_type) << '\t'
         << r.answer << '\t' << format_cost(r.cost) << '\t' << r.member << '\n';
  }
  return 0;
}

// --------------------------------------------------------------------- eval

struct EvalArgs {
  std::string predictions;
  std::string references;
  std::string manifest;
};

int run_eval(const EvalArgs& a, std::ostream& out, std::ostream&) {
  const auto preds = read_answers(a.predictions);
  std::vector<Answer> refs;
  if (!a.manifest.empty()) {
    const Manifest m = ingest_manifest(a.manifest, false);
    for (std::size_t i = 0; i < m.entries.size(); ++i)
      refs.push_back({row_key(m.entries[i], i), m.entries[i].field_type, m.entries[i].transcript});
  } else {
    if (a.references.empty()) throw Error("eval needs a reference file or --manifest");
    refs = read_answers(a.references);
  }
  const EvalReport report = evaluate(preds, refs);
  out << "accuracy\t" << std::fixed << std::setprecision(4) << report.overall.accuracy() << '\n'
      << format_report(report);
  return 0;
}

// ---------------------------------------------------------------- gradcheck

struct GradArgs {
  std::string config;
  std::string cell = "leaky";
  int samples = 200;
  int width = 40;
  double tolerance = 1e-4;
  std::uint64_t seed = 7;
};

int run_gradcheck(const GradArgs& a, std::ostream& out, std::ostream&) {
  StageKind cell = StageKind::kLeaky;
  if (a.cell == "mdlstm") cell = StageKind::kMdlstm;
  else if (a.cell != "leaky") throw Error("--cell must be leaky or mdlstm");
  const NetworkSpec spec = a.config.empty() ? synthetic::desk_spec(cell) : NetworkSpec::load(a.config);
  const Network net(spec);
  std::mt19937_64 rng(a.seed);
  Raster img(a.width, spec.input_height);
  std::uniform_int_distribution<int> pix(0, 255);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(pix(rng));
  const int t = net.timesteps(a.width);
  const int symbols = spec.alphabet.garbage_index();
  const int len = std::max(1, std::min(3, t / 2));
  LabelSequence labels;
  std::uniform_int_distribution<int> sym(0, symbols - 1);
  for (int i = 0; i < len; ++i) labels.push_back(sym(rng));
  GradCheckOptions opts;
  opts.samples = a.samples;
  opts.tolerance = a.tolerance;
  opts.seed = a.seed;
  const auto report = gradient_check(net, net.initialize(), img, labels, opts);
  out << "network\t" << spec.name << "\nweights\t" << net.trainable_count() << "\nsamples\t"
      << report.samples.size() << "\nloss\t" << std::setprecision(12) << report.loss
      << "\nmax_relative_error\t" << std::scientific << std::setprecision(3)
      << report.max_relative_error << "\npass_fraction\t" << std::fixed << std::setprecision(4)
      << report.pass_fraction << '\n';
  return report.pass_fraction >= 0.99 ? 0 : 1;
}

// -------------------------------------------------------------------- synth

struct SynthArgs {
  std::string what;
  std::string out;
  std::uint64_t seed = 2014;
};

int run_synth(const SynthArgs& a, std::ostream& out, std::ostream&) {
  const fs::path dir(a.out);
  fs::create_directories(dir);
  if (a.what == "toy") {
    synthetic::ToyOptions opts;
    opts.seed = a.seed;
    const auto task = synthetic::make_toy_task(opts);
    auto write_split = [&](const std::string& name, const std::vector<training::Sample>& samples,
                           const std::vector<std::string>& words) {
      fs::create_directories(dir / name);
      std::ofstream list(dir / (name + ".tsv"));
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string file = name + "/" + std::to_string(i + 1) + ".png";
        write_png(samples[i].image, dir / file);
        list << file << "\tAGE\t" << words[i] << "\t\t" << name << i + 1 << '\n';
      }
    };
    write_split("train", task.train, task.train_words);
    write_split("validation", task.validation, task.validation_words);
    std::ofstream dict(dir / "dictionary.tsv");
    for (const auto& [w, c] : task.dictionary) dict << c << '\t' << w << '\n';
    json spec = synthetic::toy_network_spec().to_json();
    spec["field_type"] = "AGE";
    spec["training"] = {{"main_epochs", 20}, {"post_epochs", 5},   {"samples_per_epoch", 500},
                        {"batch_size", 1},   {"main_lr", 0.002},   {"post_lr", 0.001},
                        {"momentum", 0.9},   {"seed", a.seed},     {"precision", "double"}};
    std::ofstream(dir / "toy_network.json") << spec.dump(2) << '\n';
    out << "wrote toy task to " << dir.string() << '\n';
    return 0;
  }
  if (a.what == "table") {
    synthetic::TableOptions opts;
    opts.seed = a.seed;
    const auto page = synthetic::make_table_page(opts);
    write_png(page.page, dir / "page.png");
    std::ofstream list(dir / "page.tsv");
    list << "# image\tfield\ttranscript\tpolygon\trow_id\n";
    for (const auto& c : page.cells) {
      list << "page.png\t" << to_string(c.field) << "\t\t";
      for (std::size_t v = 0; v < c.polygon.vertices.size(); ++v)
        list << (v ? " " : "") << c.polygon.vertices[v].x << ',' << c.polygon.vertices[v].y;
      list << "\trow" << c.row + 1 << '\n';
    }
    std::ofstream lines(dir / "lines.tsv");
    for (int y : page.row_lines) lines << "row\t" << y << '\n';
    for (int x : page.column_lines) lines << "column\t" << x << '\n';
    out << "wrote table page to " << dir.string() << '\n';
    return 0;
  }
  throw Error("synth: expected 'toy' or 'table'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Table-field handwriting reader: segmentation, training and dictionary decoding",
               "tablereader"};
  app.require_subcommand(1);
  std::optional<int> threads;
  app.add_option("--threads", threads, "OpenMP thread count")->envname("TABLEREADER_THREADS");

  SegmentArgs seg;
  auto* s_seg = app.add_subcommand("segment", "Cut, height- and contrast-normalize field images");
  s_seg->add_option("--manifest", seg.manifest, "manifest with page images and polygons")
      ->required()->envname("TABLEREADER_MANIFEST");
  s_seg->add_option("--out", seg.out, "output directory")->required();
  s_seg->add_option("--height", seg.height, "override the per-field output height");

  TrainArgs tr;
  auto* s_train = app.add_subcommand("train", "Train one network from a descriptor and a manifest");
  s_train->add_option("--config", tr.config, "network descriptor with optional 'training' section")
      ->required()->envname("TABLEREADER_CONFIG");
  s_train->add_option("--manifest", tr.manifest, "training manifest")->required()->envname("TABLEREADER_MANIFEST");
  s_train->add_option("--validation-manifest", tr.validation_manifest, "use this set instead of a split");
  s_train->add_option("--out", tr.out, "checkpoint path (rewritten every epoch)")->required();
  s_train->add_option("--resume", tr.resume, "continue from a checkpoint");
  s_train->add_option("--log", tr.log, "per-epoch TSV log (default: stdout)");
  s_train->add_option("--split", tr.split, "train:validation ratio")->capture_default_str();
  s_train->add_option("--seed", tr.seed, "seed for initialization, split and sampling")->envname("TABLEREADER_SEED");
  s_train->add_option("--precision", tr.precision, "single|double")->envname("TABLEREADER_PRECISION");
  s_train->add_option("--main-epochs", tr.main_epochs)->envname("TABLEREADER_MAIN_EPOCHS");
  s_train->add_option("--post-epochs", tr.post_epochs)->envname("TABLEREADER_POST_EPOCHS");
  s_train->add_option("--samples-per-epoch", tr.samples_per_epoch)->envname("TABLEREADER_SAMPLES_PER_EPOCH");
  s_train->add_option("--batch-size", tr.batch_size)->envname("TABLEREADER_BATCH_SIZE");
  s_train->add_option("--main-lr", tr.main_lr)->envname("TABLEREADER_MAIN_LR");
  s_train->add_option("--post-lr", tr.post_lr)->envname("TABLEREADER_POST_LR");
  s_train->add_option("--momentum", tr.momentum)->envname("TABLEREADER_MOMENTUM");

  DecodeArgs dec;
  auto* s_dec = app.add_subcommand("decode", "Dictionary decoding with committees and consistency rules");
  s_dec->add_option("--committee", dec.committee, "checkpoint(s); grouped by field type")->required();
  s_dec->add_option("--dict", dec.dicts, "[FIELD=]PATH dictionary (\"count<TAB>word\")")->required();
  s_dec->add_option("--given-dict", dec.given_dict, "given-name dictionary for NAME");
  s_dec->add_option("--manifest", dec.manifest, "images to read")->required()->envname("TABLEREADER_MANIFEST");
  s_dec->add_option("--config", dec.config, "decoding table (default: built-in published values)")
      ->envname("TABLEREADER_DECODING_CONFIG");
  s_dec->add_option("--field-type", dec.field_type, "decode only this field")->envname("TABLEREADER_FIELD_TYPE");
  s_dec->add_option("--alpha", dec.alpha, "length exponent (NAME: family part)")->envname("TABLEREADER_ALPHA");
  s_dec->add_option("--beta", dec.beta, "prior weight (NAME: family part)")->envname("TABLEREADER_BETA");
  s_dec->add_option("--given-alpha", dec.given_alpha, "NAME given-name length exponent");
  s_dec->add_option("--given-beta", dec.given_beta, "NAME given-name prior weight");
  s_dec->add_option("--rules", dec.rules, "consistency rules file")->envname("TABLEREADER_RULES");
  s_dec->add_option("--lexicon", dec.lexicon, "gender lexicon for the rules")->envname("TABLEREADER_LEXICON");
  s_dec->add_option("--out", dec.out, "answer file (default: stdout)");
  s_dec->add_flag("--resolve-ditto", dec.resolve_ditto, "replace '_' family names by the name above");

  EvalArgs ev;
  auto* s_eval = app.add_subcommand("eval", "Exact-match accuracy of answers against references");
  s_eval->add_option("predictions", ev.predictions, "answer file")->required();
  s_eval->add_option("references", ev.references, "reference answer file");
  s_eval->add_option("--manifest", ev.manifest, "take references from a manifest instead");

  GradArgs gc;
  auto* s_grad = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
  s_grad->add_option("--config", gc.config, "network descriptor (default: built-in desk network)")
      ->envname("TABLEREADER_CONFIG");
  s_grad->add_option("--cell", gc.cell, "recurrent cell of the built-in network: leaky|mdlstm")
      ->capture_default_str();
  s_grad->add_option("--samples", gc.samples)->capture_default_str();
  s_grad->add_option("--width", gc.width, "input width")->capture_default_str();
  s_grad->add_option("--tolerance", gc.tolerance)->capture_default_str();
  s_grad->add_option("--seed", gc.seed)->envname("TABLEREADER_SEED")->capture_default_str();

  SynthArgs sy;
  auto* s_synth = app.add_subcommand("synth", "Write the synthetic toy task or a ruled table page");
  s_synth->add_option("what", sy.what, "toy|table")->required();
  s_synth->add_option("--out", sy.out, "output directory")->required();
  s_synth->add_option("--seed", sy.seed)->envname("TABLEREADER_SEED")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (app.get_subcommands().empty()) err << app.help();
    return code == 0 ? 2 : code;
  }

  if (threads) omp_set_num_threads(std::max(1, *threads));
  try {
    if (s_seg->parsed()) return run_segment(seg, out, err);
    if (s_train->parsed()) return run_train(tr, out, err);
    if (s_dec->parsed()) return run_decode(dec, out, err);
    if (s_eval->parsed()) return run_eval(ev, out, err);
    if (s_grad->parsed()) return run_gradcheck(gc, out, err);
    if (s_synth->parsed()) return run_synth(sy, out, err);
  } catch (const std::exception& e) {
    err << "tablereader: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace tablereader::cli
