// Copyright 2026 The lyricprep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include "doctest.h"
#include "lyricprep/errors.hpp"
#include "lyricprep/evaluate.hpp"
#include "lyricprep/textmetrics.hpp"
#include "../golden.hpp"
#include "../schema_check.hpp"

using namespace lyricprep;
namespace fs = std::filesystem;

namespace {

fs::path Eval() { return fs::path(LYRICPREP_DATA_DIR) / "eval"; }

std::vector<std::string> SchemaViolations(const EvalReport& r) {
  const auto schema = nlohmann::json::parse(golden::Read(Eval() / "report.schema.json"));
  return schema::Validate(schema, nlohmann::json::parse(dump_report(r)));
}

}  // namespace

TEST_CASE("micro corpus from a hypothesis directory") {
  const auto r = evaluate(Eval() / "hyp", Eval() / "gold");
  CHECK(r.songs == 2);
  CHECK(r.der_mismatch_s == doctest::Approx(2.0));
  CHECK(r.der_total_s == doctest::Approx(50.0));
  CHECK(r.der == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(r.wer_substitutions + r.wer_deletions + r.wer_insertions == 1);
  CHECK(r.wer_ref_length == 10);
  CHECK(r.wer == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_FALSE(r.rtf);
  REQUIRE(r.per_song.size() == 2);
  CHECK(r.per_song[0].song_id == "m1");
  CHECK(r.per_song[0].der == doctest::Approx(0.1));
  CHECK(r.per_song[0].wer == doctest::Approx(0.25));
  CHECK(SchemaViolations(r).empty());
}

TEST_CASE("micro corpus from a manifest adds RTF") {
  const auto r = evaluate(Eval() / "manifest.jsonl", Eval() / "gold");
  CHECK(r.songs == 2);
  CHECK(r.skipped == std::vector<std::string>{"m3"});
  CHECK(r.der == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(r.wer == doctest::Approx(0.1).epsilon(1e-12));
  REQUIRE(r.rtf);
  CHECK(*r.rtf == doctest::Approx(0.235).epsilon(1e-12));
  CHECK(r.processing_s == doctest::Approx(47.0));
  CHECK(r.audio_s == doctest::Approx(200.0));
  CHECK(SchemaViolations(r).empty());
  const std::string table = format_table(r);
  CHECK(table.find("4.0%") != std::string::npos);
  CHECK(table.find("10.0%") != std::string::npos);
  CHECK(table.find("0.235") != std::string::npos);
}

TEST_CASE("hypothesis equal to gold scores zero") {
  golden::Scratch scratch;
  fs::create_directories("hyp");
  for (const char* id : {"m1", "m2"}) {
    const auto gold = load_gold_annotation(golden::Read(Eval() / "gold" / (std::string(id) + ".json")));
    std::ofstream(fs::path("hyp") / (std::string(id) + ".txt")) << serialize_structured_lyrics(gold);
  }
  const auto r = evaluate("hyp", Eval() / "gold");
  CHECK(r.der == 0.0);
  CHECK(r.wer == 0.0);
  CHECK(SchemaViolations(r).empty());
}

TEST_CASE("missing gold names every absent song") {
  golden::Scratch scratch;
  fs::create_directories("hyp");
  for (const char* id : {"m1", "x1", "x2"}) std::ofstream(fs::path("hyp") / (std::string(id) + ".txt")) << "";
  try {
    evaluate("hyp", Eval() / "gold");
    FAIL("expected MissingGold");
  } catch (const MissingGold& e) {
    CHECK(e.song_ids() == std::vector<std::string>{"x1", "x2"});
  }
}

TEST_CASE("report round-trips") {
  auto r = evaluate(Eval() / "manifest.jsonl", Eval() / "gold", {0.5, false});
  CHECK(load_report(dump_report(r)) == r);
  CHECK_FALSE(load_report(dump_report(r)).score_silence);
  r.wer = kInfiniteWer;
  r.per_song[0].wer = kInfiniteWer;
  const auto text = dump_report(r);
  CHECK(text.find("\"wer\": null") != std::string::npos);
  CHECK(load_report(text) == r);
  CHECK(SchemaViolations(r).empty());
  CHECK_THROWS_AS(load_report("{}"), SchemaError);
  CHECK_THROWS_AS(load_report("[1"), SchemaError);
}

TEST_CASE("vocal_text joins vocal lyrics in order") {
  SongAnnotation a;
  a.segments = {{StructureLabel::kVerse, 0, 1, "a b"},
                {StructureLabel::kInst, 1, 2, ""},
                {StructureLabel::kChorus, 2, 3, ""},
                {StructureLabel::kBridge, 3, 4, "c"}};
  CHECK(vocal_text(a) == "a b c");
}
