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

#include "lyricprep/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "lyricprep/errors.hpp"
#include "lyricprep/structfmt.hpp"
#include "lyricprep/textmetrics.hpp"

namespace lyricprep {

using nlohmann::ordered_json;

namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

ordered_json Finite(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

const ordered_json& Field(const ordered_json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + key, "missing field");
  return *it;
}

double Number(const ordered_json& j, const std::string& key, const std::string& path = "") {
  const auto& v = Field(j, key, path);
  if (!v.is_number()) throw SchemaError(path + key, "expected a number");
  return v.get<double>();
}

// null stands for the infinite-WER sentinel (or an undefined DER).
double NumberOr(const ordered_json& j, const std::string& key, double null_value,
                const std::string& path = "") {
  const auto& v = Field(j, key, path);
  if (v.is_null()) return null_value;
  if (!v.is_number()) throw SchemaError(path + key, "expected a number or null");
  return v.get<double>();
}

std::size_t Count(const ordered_json& j, const std::string& key, const std::string& path = "") {
  const auto& v = Field(j, key, path);
  if (!v.is_number_unsigned()) throw SchemaError(path + key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string Percent(double v) {
  if (std::isinf(v)) return "inf";
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", v * 100.0);
  return buf;
}

}  // namespace

std::string dump_report(const EvalReport& r) {
  ordered_json j;
  j["songs"] = r.songs;
  j["skipped"] = r.skipped;
  j["collar_s"] = r.collar_s;
  j["score_silence"] = r.score_silence;
  j["der"] = r.der_total_s > 0.0 ? Finite(r.der) : ordered_json(nullptr);
  j["der_mismatch_s"] = r.der_mismatch_s;
  j["der_total_s"] = r.der_total_s;
  j["wer"] = Finite(r.wer);
  j["wer_substitutions"] = r.wer_substitutions;
  j["wer_deletions"] = r.wer_deletions;
  j["wer_insertions"] = r.wer_insertions;
  j["wer_ref_length"] = r.wer_ref_length;
  j["rtf"] = r.rtf ? ordered_json(*r.rtf) : ordered_json(nullptr);
  j["processing_s"] = r.processing_s;
  j["audio_s"] = r.audio_s;
  j["per_song"] = ordered_json::array();
  for (const SongScore& s : r.per_song) {
    ordered_json row;
    row["song_id"] = s.song_id;
    row["der"] = Finite(s.der);
    row["der_mismatch_s"] = s.der_mismatch_s;
    row["der_total_s"] = s.der_total_s;
    row["wer"] = Finite(s.wer);
    row["wer_errors"] = s.wer_errors;
    row["wer_ref_length"] = s.wer_ref_length;
    j["per_song"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

EvalReport load_report(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw SchemaError("report", e.what());
  }
  if (!j.is_object()) throw SchemaError("report", "expected an object");
  EvalReport r;
  r.songs = Count(j, "songs");
  const auto& skipped = Field(j, "skipped", "");
  if (!skipped.is_array()) throw SchemaError("skipped", "expected an array");
  for (const auto& s : skipped) {
    if (!s.is_string()) throw SchemaError("skipped", "expected strings");
    r.skipped.push_back(s.get<std::string>());
  }
  r.collar_s = Number(j, "collar_s");
  const auto& silence = Field(j, "score_silence", "");
  if (!silence.is_boolean()) throw SchemaError("score_silence", "expected a boolean");
  r.score_silence = silence.get<bool>();
  r.der_mismatch_s = Number(j, "der_mismatch_s");
  r.der_total_s = Number(j, "der_total_s");
  r.der = NumberOr(j, "der", 0.0);
  r.wer = NumberOr(j, "wer", kInfiniteWer);
  r.wer_substitutions = Count(j, "wer_substitutions");
  r.wer_deletions = Count(j, "wer_deletions");
  r.wer_insertions = Count(j, "wer_insertions");
  r.wer_ref_length = Count(j, "wer_ref_length");
  if (const auto& v = Field(j, "rtf", ""); !v.is_null()) r.rtf = Number(j, "rtf");
  r.processing_s = Number(j, "processing_s");
  r.audio_s = Number(j, "audio_s");
  const auto& rows = Field(j, "per_song", "");
  if (!rows.is_array()) throw SchemaError("per_song", "expected an array");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string path = "per_song[" + std::to_string(i) + "].";
    const auto& row = rows[i];
    if (!row.is_object()) throw SchemaError(path.substr(0, path.size() - 1), "expected an object");
    SongScore s;
    const auto& id = Field(row, "song_id", path);
    if (!id.is_string()) throw SchemaError(path + "song_id", "expected a string");
    s.song_id = id.get<std::string>();
    s.der = NumberOr(row, "der", 0.0, path);
    s.der_mismatch_s = Number(row, "der_mismatch_s", path);
    s.der_total_s = Number(row, "der_total_s", path);
    s.wer = NumberOr(row, "wer", kInfiniteWer, path);
    s.wer_errors = Count(row, "wer_errors", path);
    s.wer_ref_length = Count(row, "wer_ref_length", path);
    r.per_song.push_back(std::move(s));
  }
  return r;
}

std::string format_table(const EvalReport& r, std::string_view system) {
  std::string rtf = "n/a";
  if (r.rtf) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", *r.rtf);
    rtf = buf;
  }
  const std::string der = r.der_total_s > 0.0 ? Percent(r.der) : "n/a";
  const std::string name(system);
  const std::size_t width = std::max<std::size_t>(name.size(), 6);
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  std::string out;
  out += pad("Model", width) + "  " + pad("DER", 7) + "  " + pad("WER", 7) + "  RTF\n";
  out += pad(name, width) + "  " + pad(der, 7) + "  " + pad(Percent(r.wer), 7) + "  " + rtf + "\n";
  out += "(" + std::to_string(r.songs) + " songs";
  if (!r.skipped.empty()) out += ", " + std::to_string(r.skipped.size()) + " skipped";
  out += ")\n";
  return out;
}

std::string vocal_text(const SongAnnotation& ann) {
  std::string out;
  for (const Segment& s : ann.segments) {
    if (!is_vocal(s.label) || s.lyric.empty()) continue;
    if (!out.empty()) out += ' ';
    out += s.lyric;
  }
  return out;
}

EvalReport evaluate_pairs(const std::vector<std::pair<SongAnnotation, SongAnnotation>>& pairs,
                          const DerOptions& options) {
  EvalReport r;
  r.collar_s = options.collar_s;
  r.score_silence = options.score_silence;
  r.songs = pairs.size();
  std::vector<WerPair> texts;
  for (const auto& [gold, hyp] : pairs) {
    const DerReport d = der(gold, hyp, options);
    const WerReport w = wer(vocal_text(gold), vocal_text(hyp), LanguageHint::kAuto);
    r.per_song.push_back({gold.song_id, d.der, d.mismatch_s, d.total_s, w.wer, w.errors(), w.ref_length});
    r.der_mismatch_s += d.mismatch_s;
    r.der_total_s += d.total_s;
    texts.emplace_back(vocal_text(gold), vocal_text(hyp), LanguageHint::kAuto);
  }
  r.der = r.der_total_s > 0.0 ? r.der_mismatch_s / r.der_total_s : 0.0;
  const WerReport w = corpus_wer(texts);
  r.wer = w.wer;
  r.wer_substitutions = w.substitutions;
  r.wer_deletions = w.deletions;
  r.wer_insertions = w.insertions;
  r.wer_ref_length = w.ref_length;
  return r;
}

EvalReport evaluate(const std::filesystem::path& hyp, const std::filesystem::path& gold_dir,
                    const DerOptions& options) {
  namespace fs = std::filesystem;
  struct Hyp {
    std::string song_id;
    fs::path file;
  };
  std::vector<Hyp> hyps;
  std::vector<std::string> skipped;
  double processing = 0.0;
  double audio = 0.0;
  bool timed = false;

  if (fs::is_directory(hyp)) {
    for (const auto& entry : fs::directory_iterator(hyp)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        hyps.push_back({entry.path().stem().string(), entry.path()});
      }
    }
    std::sort(hyps.begin(), hyps.end(), [](const Hyp& a, const Hyp& b) { return a.song_id < b.song_id; });
  } else {
    const fs::path base = hyp.parent_path();
    for (const ManifestEntry& e : load_manifest(ReadFile(hyp))) {
      auto final_it = e.stage_outputs.find("final");
      if (e.status != SongStatus::kOk || final_it == e.stage_outputs.end()) {
        skipped.push_back(e.song_id);
        continue;
      }
      hyps.push_back({e.song_id, base / final_it->second});
      if (e.duration_s && *e.duration_s > 0.0) {
        processing += e.processing_s();
        audio += *e.duration_s;
        timed = true;
      }
    }
  }

  std::vector<std::string> missing;
  for (const Hyp& h : hyps) {
    if (!fs::is_regular_file(gold_dir / (h.song_id + ".json"))) missing.push_back(h.song_id);
  }
  if (!missing.empty()) throw MissingGold(missing);

  std::vector<std::pair<SongAnnotation, SongAnnotation>> pairs;
  for (const Hyp& h : hyps) {
    SongAnnotation gold = load_gold_annotation(ReadFile(gold_dir / (h.song_id + ".json")));
    SongAnnotation ann = parse_structured_lyrics(ReadFile(h.file));
    ann.song_id = h.song_id;
    pairs.emplace_back(std::move(gold), std::move(ann));
  }
  EvalReport report = evaluate_pairs(pairs, options);
  report.skipped = std::move(skipped);
  if (timed) {
    const RtfReport r = rtf(processing, audio);
    report.rtf = r.rtf;
    report.processing_s = r.processing_s;
    report.audio_s = r.audio_s;
  }
  return report;
}

}  // namespace lyricprep
