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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "tablereader/alphabet.hpp"
#include "tablereader/common.hpp"
#include "tablereader/fields.hpp"
#include "tablereader/manifest.hpp"
#include "tablereader/png_io.hpp"

using namespace tablereader;

namespace {

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / "tablereader_fields";
  std::filesystem::create_directories(d);
  return d;
}

std::filesystem::path write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("field alphabet catalog") {
  CHECK(field_alphabet(FieldType::kName).size() == 56);
  CHECK(field_alphabet(FieldType::kRelation).size() == 56);
  CHECK(field_alphabet(FieldType::kAge).size() == 25);
  CHECK(field_alphabet(FieldType::kMarital).size() == 7);
  CHECK(field_alphabet(FieldType::kBirthplace).size() == 55);
  const auto& age = field_alphabet(FieldType::kAge);
  for (int n = 0; n <= 12; ++n) CHECK(age.index_of(std::to_string(n) + "/12") >= 0);
  CHECK(field_alphabet(FieldType::kMarital).symbols() ==
        std::vector<std::string>{"S", "M", "W", "D", "C", "V"});
}

TEST_CASE("gt_normalize") {
  CHECK(gt_normalize(FieldType::kMarital, "M") == "M");
  SUBCASE("fractional age is one token") {
    const std::string n = gt_normalize(FieldType::kAge, "4/12");
    CHECK(n == "4/12");
    CHECK(field_alphabet(FieldType::kAge).tokenize(n).size() == 1);
    CHECK(field_alphabet(FieldType::kAge).tokenize(gt_normalize(FieldType::kAge, "11/12")).size() == 1);
  }
  SUBCASE("charset violation names the character") {
    CHECK_THROWS_WITH_AS(gt_normalize(FieldType::kRelation, "Head!"), doctest::Contains("'!'"), FormatError);
  }
  SUBCASE("ditto mark") {
    CHECK(gt_normalize(FieldType::kName, "= John") == "_ John");
    CHECK_THROWS_AS(gt_normalize(FieldType::kRelation, "="), FormatError);
  }
  SUBCASE("whitespace") { CHECK(gt_normalize(FieldType::kBirthplace, "  New   York \t") == "New York"); }
  SUBCASE("idempotent") {
    for (auto [t, s] : std::vector<std::pair<FieldType, std::string>>{
             {FieldType::kName, " =  O'Brien "}, {FieldType::kAge, "3 4/12"}, {FieldType::kRelation, "Son-in-law"}}) {
      const auto once = gt_normalize(t, s);
      CHECK(gt_normalize(t, once) == once);
    }
  }
}

TEST_CASE("evaluate") {
  const std::vector<Answer> refs{{"1", FieldType::kMarital, "M"},
                                 {"2", FieldType::kMarital, "S"},
                                 {"3", FieldType::kRelation, "Head"},
                                 {"4", FieldType::kRelation, "Wife"}};
  SUBCASE("identical") {
    const auto r = evaluate(refs, refs);
    CHECK(r.overall.accuracy() == 1.0);
    CHECK(r.per_field.at(FieldType::kMarital).accuracy() == 1.0);
  }
  SUBCASE("disjoint") {
    std::vector<Answer> preds{{"1", FieldType::kMarital, "W"},
                              {"2", FieldType::kMarital, "W"},
                              {"3", FieldType::kRelation, "Son"},
                              {"4", FieldType::kRelation, "Son"}};
    CHECK(evaluate(preds, refs).overall.accuracy() == 0.0);
  }
  SUBCASE("3 of 4") {
    auto preds = refs;
    preds[3].text = "Head";
    const auto r = evaluate(preds, refs);
    CHECK(r.overall.accuracy() == 0.75);
    CHECK(r.per_field.at(FieldType::kRelation).accuracy() == 0.5);
  }
  SUBCASE("counts reconcile") {
    auto bad = refs;
    bad.push_back({"5", FieldType::kMarital, "?"});
    std::vector<Answer> preds(refs.begin(), refs.begin() + 3);
    const auto r = evaluate(preds, bad);
    CHECK(r.skipped == 1);
    CHECK(r.missing == 1);
    CHECK(r.overall.evaluated + r.skipped == static_cast<int>(bad.size()));
    CHECK(r.overall.accuracy() == 0.75);
  }
  SUBCASE("comparison after normalization") {
    std::vector<Answer> preds{{"1", FieldType::kMarital, " M "}};
    CHECK(evaluate(preds, {refs[0]}).overall.accuracy() == 1.0);
  }
}

TEST_CASE("read_answers") {
  const auto p = write(scratch_dir() / "answers.tsv", "# row\tfield\tanswer\n7\tMARITAL\tW\t3.2\t0\n8\tR\tHead\n");
  const auto a = read_answers(p);
  REQUIRE(a.size() == 2);
  CHECK(a[0] == Answer{"7", FieldType::kMarital, "W"});
  CHECK(a[1].field == FieldType::kRelation);
}

TEST_CASE("ingest_manifest") {
  const auto dir = scratch_dir();
  write_png(Raster(10, 8), dir / "a.png");
  write_png(Raster(10, 8), dir / "b.png");
  SUBCASE("empty file") {
    const auto m = ingest_manifest(write(dir / "empty.tsv", ""));
    CHECK(m.entries.empty());
    CHECK(m.dropped == 0);
  }
  SUBCASE("missing image is dropped and counted") {
    const auto m = ingest_manifest(write(dir / "missing.tsv", "a.png\tMARITAL\tM\nnothere.png\tMARITAL\tS\n"));
    CHECK(m.entries.size() == 1);
    CHECK(m.dropped == 1);
    REQUIRE(m.drop_reasons.size() == 1);
    CHECK(m.drop_reasons[0].find("nothere.png") != std::string::npos);
  }
  SUBCASE("3-row fixture") {
    const auto m = ingest_manifest(write(dir / "three.tsv",
                                         "# image\ttype\ttranscript\tpolygon\trow\n"
                                         "a.png\tNAME\t=  Mary\t\tr1\n"
                                         "b.png\tAGE\t 4/12\n"
                                         "a.png\tB\tNew York\t0,0 9,0 9,7 0,7\tr2\n"));
    REQUIRE(m.entries.size() == 3);
    CHECK(m.dropped == 0);
    CHECK(m.entries[0].transcript == "_ Mary");
    CHECK(m.entries[0].row_id == "r1");
    CHECK_FALSE(m.entries[0].polygon);
    CHECK(m.entries[1].transcript == "4/12");
    CHECK(m.entries[1].field_type == FieldType::kAge);
    CHECK(m.entries[2].field_type == FieldType::kBirthplace);
    REQUIRE(m.entries[2].polygon);
    CHECK(m.entries[2].polygon->vertices.size() == 4);
    CHECK(std::filesystem::path(m.entries[0].image) == dir / "a.png");
  }
  SUBCASE("bad rows") {
    const auto m = ingest_manifest(write(dir / "bad.tsv",
                                         "a.png\tNOPE\tM\n"
                                         "a.png\tMARITAL\tQ\n"
                                         "a.png\tMARITAL\t\n"
                                         "a.png\tMARITAL\n"
                                         "a.png\tMARITAL\tM\t1,2 x\n"));
    CHECK(m.entries.empty());
    CHECK(m.dropped == 5);
  }
}

TEST_CASE("parse_polygon") {
  const auto p = parse_polygon("1,2 30,2 30,40", FieldType::kAge);
  CHECK(p.vertices == std::vector<preproc::Point>{{1, 2}, {30, 2}, {30, 40}});
  CHECK(p.field_type == FieldType::kAge);
  CHECK_THROWS_AS(parse_polygon("", FieldType::kAge), FormatError);
  CHECK_THROWS_AS(parse_polygon("1;2", FieldType::kAge), FormatError);
}
