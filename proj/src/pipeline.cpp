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

#include "lyricprep/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "lyricprep/errors.hpp"
#include "lyricprep/structfmt.hpp"
#include "lyricprep/textmetrics.hpp"
#include "lyricprep/timelineops.hpp"
#include "lyricprep/werfix.hpp"

namespace lyricprep {

using nlohmann::json;

std::vector<SongInput> load_inputs(std::string_view jsonl) {
  std::vector<SongInput> out;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset < jsonl.size()) {
    std::size_t nl = jsonl.find('\n', offset);
    if (nl == std::string_view::npos) nl = jsonl.size();
    const std::string line(jsonl.substr(offset, nl - offset));
    offset = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError("$", std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!j.is_object()) throw SchemaError("$", "expected an object", line_no);
    SongInput in;
    for (const char* key : {"song_id", "audio_path"}) {
      auto it = j.find(key);
      if (it == j.end()) throw SchemaError(key, "missing field", line_no);
      if (!it->is_string()) throw SchemaError(key, "expected a string", line_no);
    }
    in.song_id = j["song_id"].get<std::string>();
    in.audio_path = j["audio_path"].get<std::string>();
    if (auto it = j.find("reference_lyrics"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) throw SchemaError("reference_lyrics", "expected a string", line_no);
      in.reference_lyrics = it->get<std::string>();
    }
    out.push_back(std::move(in));
  }
  return out;
}

PipelineBackends PipelineBackends::from_config(const PipelineConfig& config) {
  validate_config(config);
  PipelineBackends b;
  b.separate = make_backend(config.backends.at(kOpSeparate).front());
  b.structure = make_backend(config.backends.at(kOpStructure).front());
  for (const auto& spec : config.backends.at(kOpTranscribe)) {
    b.transcribe.push_back(make_backend(spec));
  }
  b.align = make_backend(config.backends.at(kOpAlign).front());
  return b;
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)), backends_(PipelineBackends::from_config(config_)) {}

Pipeline::Pipeline(PipelineConfig config, PipelineBackends backends)
    : config_(std::move(config)), backends_(std::move(backends)) {
  if (!backends_.separate || !backends_.structure || !backends_.align ||
      backends_.transcribe.empty()) {
    throw ConfigError("pipeline: every stage needs a backend");
  }
  if (config_.mode == PipelineMode::kDualHead && backends_.transcribe.size() < 2) {
    throw ConfigError("pipeline: dual_head mode needs two transcription heads");
  }
}

namespace {

std::string ShortNumber(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool SafeSongId(const std::string& id) {
  return !id.empty() && id != "." && id != ".." && id.find_first_of("/\\") == std::string::npos;
}

std::string JoinNonEmpty(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

// Sorts by start, clips overlaps against the previous word and drops
// degenerate words so the list satisfies the WordAlignment invariants.
std::vector<WordAlignment> Sanitize(std::vector<WordAlignment> words) {
  std::stable_sort(words.begin(), words.end(),
                   [](const WordAlignment& a, const WordAlignment& b) { return a.start_s < b.start_s; });
  std::vector<WordAlignment> out;
  for (WordAlignment& w : words) {
    if (!out.empty() && w.start_s < out.back().end_s) w.start_s = out.back().end_s;
    if (!(w.start_s < w.end_s) || !std::isfinite(w.start_s) || !std::isfinite(w.end_s)) continue;
    w.score = std::isfinite(w.score) ? std::clamp(w.score, 0.0, 1.0) : 1.0;
    out.push_back(std::move(w));
  }
  return out;
}

class StageFailure : public Error {
 public:
  StageFailure(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class StageTimer {
 public:
  StageTimer(ManifestEntry& entry, std::string stage)
      : entry_(entry), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    entry_.timings_s[stage_] += d.count();
  }

 private:
  ManifestEntry& entry_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

ManifestEntry Pipeline::process_song(const SongInput& input) {
  ManifestEntry entry;
  entry.song_id = input.song_id;
  entry.audio_path = input.audio_path;
  entry.status = SongStatus::kOk;

  auto call = [&](Backend& backend, const BackendRequest& req) {
    BackendResponse resp = backend_call(backend, req, config_.backend_timeout_s);
    if (!resp.ok) throw StageFailure(req.op, resp.error.value_or("backend failure"));
    return resp;
  };
  auto reject = [&](const std::string& reason) {
    entry.status = SongStatus::kRejected;
    entry.reject_reason = reason;
  };

  std::string stage = "input";
  // Stage timers are scoped inside the lambda so they land in the entry
  // before it is returned.
  auto stages = [&] {
    if (!SafeSongId(input.song_id)) throw StageFailure("input", "invalid song_id");
    std::error_code ec;
    if (!std::filesystem::exists(input.audio_path, ec)) {
      throw StageFailure("input", "audio not found: " + input.audio_path);
    }

    std::string vocals;
    {
      stage = kOpSeparate;
      StageTimer t(entry, stage);
      const auto stems = stems_payload(call(*backends_.separate,
                                            Request(kOpSeparate, input.song_id, input.audio_path)));
      auto it = stems.find("vocals");
      if (it == stems.end()) throw StageFailure(stage, "no vocals stem");
      vocals = it->second;
      entry.stage_outputs[kOpSeparate] = vocals;
    }

    StructurePayload structure;
    {
      stage = kOpStructure;
      StageTimer t(entry, stage);
      // The original mix is the exact reassembly of the separated stems.
      structure = structure_payload(call(*backends_.structure,
                                         Request(kOpStructure, input.song_id, input.audio_path)));
    }

    SongAnnotation ann;
    {
      stage = "normalize";
      StageTimer t(entry, stage);
      double duration = 0.0;
      for (const RawSegment& s : structure.segments) duration = std::max(duration, s.end_s);
      if (structure.duration_s) duration = *structure.duration_s;
      if (!(duration > 0.0)) throw StageFailure(kOpStructure, "empty segmentation");
      std::vector<RawSegment> raw = structure.segments;
      for (RawSegment& s : raw) s.lyric.clear();
      ann = normalize_timeline(remap_labels(raw, config_.label_mapping), duration, input.song_id);
      entry.duration_s = duration;
      entry.stage_outputs[kOpStructure] = serialize_structured_lyrics(ann);
    }

    std::vector<std::size_t> vocal_idx;
    for (std::size_t i = 0; i < ann.segments.size(); ++i) {
      if (is_vocal(ann.segments[i].label)) vocal_idx.push_back(i);
    }

    const bool dual = config_.mode == PipelineMode::kDualHead;
    std::vector<std::vector<std::string>> heads(dual ? 2 : 1);
    {
      stage = kOpTranscribe;
      StageTimer t(entry, stage);
      for (std::size_t h = 0; h < heads.size(); ++h) {
        for (std::size_t i : vocal_idx) {
          BackendRequest req = Request(kOpTranscribe, input.song_id, vocals);
          req.span = std::make_pair(ann.segments[i].start_s, ann.segments[i].end_s);
          heads[h].push_back(transcribe_payload(call(*backends_.transcribe[h], req)));
        }
      }
      entry.stage_outputs[kOpTranscribe] = JoinNonEmpty(heads[0]);
    }

    const LanguageHint hint = config_.language_hint;
    std::vector<std::string> lyrics;
    for (const std::string& text : heads[0]) {
      lyrics.push_back(detokenize(tokenize(text, hint).tokens, hint));
    }

    if (dual) {
      stage = "dual_head";
      StageTimer t(entry, stage);
      const auto decision = dual_head_arbitrate(JoinNonEmpty(heads[0]), JoinNonEmpty(heads[1]),
                                                hint, config_.accept_threshold);
      entry.cross_wer = decision.cross_wer;
      entry.wer_estimate = decision.cross_wer;
      if (!decision.accepted) {
        reject("dual_head: cross_wer " + ShortNumber(decision.cross_wer) +
                      " >= " + ShortNumber(config_.accept_threshold));
        return;
      }
      entry.stage_outputs["dual_head"] = detokenize(tokenize(decision.chosen, hint).tokens, hint);
    } else if (input.reference_lyrics) {
      stage = "werfix";
      StageTimer t(entry, stage);
      const auto outcome = fix_lyrics(*input.reference_lyrics, JoinNonEmpty(heads[0]), hint,
                                      config_.reject_threshold);
      entry.wer_estimate = outcome.wer_ref_vs_hyp;
      if (outcome.status == FixStatus::kRejected) {
        reject("werfix: wer " + ShortNumber(outcome.wer_ref_vs_hyp) +
                      " >= " + ShortNumber(config_.reject_threshold));
        return;
      }
      // Fixed text has one token per hypothesis token, so each section
      // takes back as many tokens as it contributed.
      std::size_t offset = 0;
      for (std::size_t k = 0; k < heads[0].size(); ++k) {
        const std::size_t n = tokenize(heads[0][k], hint).size();
        const auto first = outcome.fixed_tokens.begin() + static_cast<std::ptrdiff_t>(offset);
        lyrics[k] = detokenize({first, first + static_cast<std::ptrdiff_t>(n)}, hint);
        offset += n;
      }
      entry.stage_outputs["werfix"] = outcome.fixed_text;
    }
    for (std::size_t k = 0; k < vocal_idx.size(); ++k) ann.segments[vocal_idx[k]].lyric = lyrics[k];

    std::vector<WordAlignment> words;
    {
      stage = kOpAlign;
      StageTimer t(entry, stage);
      for (std::size_t k = 0; k < vocal_idx.size(); ++k) {
        if (lyrics[k].empty()) continue;
        const Segment& seg = ann.segments[vocal_idx[k]];
        BackendRequest req = Request(kOpAlign, input.song_id, vocals);
        req.span = std::make_pair(seg.start_s, seg.end_s);
        req.text = lyrics[k];
        for (WordAlignment& w : align_payload(call(*backends_.align, req))) {
          words.push_back(std::move(w));
        }
      }
      words = Sanitize(std::move(words));
    }

    {
      stage = "calibrate";
      StageTimer t(entry, stage);
      ann = calibrate_boundaries(ann, words, config_.calibration);
      require_valid(ann, true);
    }

    {
      stage = "write";
      StageTimer t(entry, stage);
      const std::string name = input.song_id + ".txt";
      std::filesystem::create_directories(config_.output_dir);
      std::ofstream out(config_.output_dir / name, std::ios::binary | std::ios::trunc);
      out << serialize_structured_lyrics(ann);
      if (!out) throw StageFailure(stage, "cannot write " + (config_.output_dir / name).string());
      entry.stage_outputs["final"] = name;
    }
  };

  try {
    stages();
  } catch (const StageFailure& e) {
    entry.status = SongStatus::kFailed;
    entry.reject_reason = e.what();
  } catch (const std::exception& e) {
    entry.status = SongStatus::kFailed;
    entry.reject_reason = stage + ": " + e.what();
  }
  return entry;
}

std::vector<ManifestEntry> Pipeline::run(const std::vector<SongInput>& inputs) {
  std::filesystem::create_directories(config_.output_dir);
  std::vector<ManifestEntry> results(inputs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      results[i] = process_song(inputs[i]);
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config_.worker_count),
                                              std::max<std::size_t>(inputs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  // Single writer, after all songs settled, in input order.
  std::ofstream out(config_.output_dir / kManifestFile, std::ios::binary | std::ios::trunc);
  out << dump_manifest(results);
  if (!out) throw Error("cannot write manifest in " + config_.output_dir.string());
  return results;
}

std::vector<ManifestEntry> run_pipeline(const PipelineConfig& config,
                                        const std::vector<SongInput>& inputs) {
  Pipeline pipeline(config);
  return pipeline.run(inputs);
}

ManifestEntry mask_timings(ManifestEntry entry) {
  for (auto& [stage, secs] : entry.timings_s) secs = 0.0;
  return entry;
}

}  // namespace lyricprep
