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

// lyricprep command-line interface.
//
// Exit codes: 0 success, 1 usage/config/input error, 2 hypothesis without
// gold annotation. Per-song pipeline failures do not change the exit code.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lyricprep/config.hpp"
#include "lyricprep/errors.hpp"
#include "lyricprep/evaluate.hpp"
#include "lyricprep/pipeline.hpp"
#include "lyricprep/structfmt.hpp"
#include "lyricprep/textmetrics.hpp"
#include "lyricprep/timemetrics.hpp"
#include "lyricprep/werfix.hpp"

namespace lp = lyricprep;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lp::InvalidInput("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteFile(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  if (!out) throw lp::InvalidInput("cannot write " + path.string());
}

ordered_json Finite(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

lp::LanguageHint Hint(const std::string& name) {
  auto hint = lp::hint_from_string(name);
  if (!hint) throw lp::InvalidInput("unknown language hint \"" + name + "\"");
  return *hint;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured-lyrics corpus preparation and evaluation"};
  app.require_subcommand(1);

  std::string config_path, input_path;
  auto* run = app.add_subcommand("run", "process songs through the backends");
  run->add_option("--config", config_path, "YAML config")->required();
  run->add_option("--input", input_path, "JSON lines of {song_id, audio_path, reference_lyrics?}")->required();

  std::string hyp_path, gold_dir, report_path;
  double collar = 0.0;
  bool ignore_silence = false;
  bool json_out = false;
  auto* eval = app.add_subcommand("eval", "score hypotheses against gold annotations");
  eval->add_option("--hyp", hyp_path, "directory of <song_id>.txt or a manifest")->required();
  eval->add_option("--gold", gold_dir, "directory of <song_id>.json")->required();
  eval->add_option("--collar", collar, "seconds excluded around reference boundaries");
  eval->add_flag("--ignore-silence", ignore_silence, "do not score reference silence");
  eval->add_option("--report", report_path, "write the JSON report here");
  eval->add_flag("--json", json_out, "print the JSON report instead of the table");

  std::string file;
  std::string song_id;
  auto* parse = app.add_subcommand("parse", "structured lyrics -> gold JSON");
  parse->add_option("file", file)->required();
  parse->add_option("--song-id", song_id, "defaults to the file stem");
  auto* serialize = app.add_subcommand("serialize", "gold JSON -> structured lyrics");
  serialize->add_option("file", file)->required();

  std::string ref_path, hint = "auto";
  auto* wer = app.add_subcommand("wer", "word error rate between two text files");
  wer->add_option("--ref", ref_path)->required();
  wer->add_option("--hyp", hyp_path)->required();
  wer->add_option("--hint", hint, "zh|en|auto|cjk|latin");

  double duration = 0.0;
  auto* der = app.add_subcommand("der", "DER of structured lyrics against a gold annotation");
  der->add_option("--ref", ref_path, "gold JSON")->required();
  der->add_option("--hyp", hyp_path, "structured lyrics")->required();
  auto* duration_opt = der->add_option("--duration", duration, "overrides the gold duration_s");
  der->add_option("--collar", collar);
  der->add_flag("--ignore-silence", ignore_silence);

  double threshold = lp::kDefaultRejectThreshold;
  auto* fix = app.add_subcommand("fix", "repair a transcript with reference lyrics");
  fix->add_option("--ref", ref_path)->required();
  fix->add_option("--hyp", hyp_path)->required();
  fix->add_option("--threshold", threshold, "reject when WER reaches this");
  fix->add_option("--hint", hint);

  std::string manifest_path, dropped_path;
  double max_wer = 0.0;
  auto* filter = app.add_subcommand("filter", "keep manifest entries with wer_estimate < max-wer");
  filter->add_option("--manifest", manifest_path)->required();
  filter->add_option("--max-wer", max_wer)->required();
  filter->add_option("--dropped", dropped_path, "write dropped entries here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const lp::PipelineConfig config = lp::load_config_file(config_path);
      const auto inputs = lp::load_inputs(ReadFile(input_path));
      const auto entries = lp::run_pipeline(config, inputs);
      std::size_t counts[3] = {0, 0, 0};
      for (const auto& e : entries) ++counts[static_cast<int>(e.status)];
      std::cerr << entries.size() << " songs: " << counts[0] << " ok, " << counts[1] << " rejected, "
                << counts[2] << " failed; manifest " << (config.output_dir / lp::kManifestFile).string()
                << "\n";
    } else if (*eval) {
      lp::DerOptions options{collar, !ignore_silence};
      const lp::EvalReport report = lp::evaluate(hyp_path, gold_dir, options);
      const std::string json = lp::dump_report(report);
      if (!report_path.empty()) WriteFile(report_path, json);
      std::cout << (json_out ? json : lp::format_table(report));
    } else if (*parse) {
      lp::SongAnnotation ann = lp::parse_structured_lyrics(ReadFile(file));
      ann.song_id = song_id.empty() ? fs::path(file).stem().string() : song_id;
      if (!ann.segments.empty()) ann.duration_s = ann.segments.back().end_s;
      std::cout << lp::dump_gold_annotation(ann);
    } else if (*serialize) {
      std::cout << lp::serialize_structured_lyrics(lp::load_gold_annotation(ReadFile(file)));
    } else if (*wer) {
      const auto r = lp::wer(ReadFile(ref_path), ReadFile(hyp_path), Hint(hint));
      ordered_json j{{"wer", Finite(r.wer)}, {"substitutions", r.substitutions},
                     {"deletions", r.deletions}, {"insertions", r.insertions},
                     {"ref_length", r.ref_length}};
      std::cout << j.dump() << "\n";
    } else if (*der) {
      lp::SongAnnotation ref = lp::load_gold_annotation(ReadFile(ref_path));
      if (*duration_opt) ref.duration_s = duration;
      const auto hyp = lp::parse_structured_lyrics(ReadFile(hyp_path));
      const auto r = lp::der(ref, hyp, {collar, !ignore_silence});
      ordered_json j{{"der", r.der}, {"mismatch_s", r.mismatch_s}, {"total_s", r.total_s}};
      std::cout << j.dump() << "\n";
    } else if (*fix) {
      const auto r = lp::fix_lyrics(ReadFile(ref_path), ReadFile(hyp_path), Hint(hint), threshold);
      ordered_json j{{"status", r.status == lp::FixStatus::kFixed ? "fixed" : "rejected"},
                     {"wer", Finite(r.wer_ref_vs_hyp)},
                     {"fixed_text", r.fixed_text},
                     {"substitutions_taken", r.substitutions_taken},
                     {"insertions_taken", r.insertions_taken},
                     {"deletions_applied", r.deletions_applied}};
      std::cout << j.dump() << "\n";
    } else if (*filter) {
      const auto result = lp::filter_dataset(lp::load_manifest(ReadFile(manifest_path)), max_wer);
      std::cout << lp::dump_manifest(result.kept);
      if (!dropped_path.empty()) WriteFile(dropped_path, lp::dump_manifest(result.dropped));
      std::cerr << result.kept.size() << " kept, " << result.dropped.size() << " dropped\n";
    }
  } catch (const lp::MissingGold& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
