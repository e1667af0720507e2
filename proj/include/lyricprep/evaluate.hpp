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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lyricprep/annotation.hpp"
#include "lyricprep/timemetrics.hpp"

namespace lyricprep {

struct SongScore {
  std::string song_id;
  double der = 0.0;
  double der_mismatch_s = 0.0;
  double der_total_s = 0.0;
  double wer = 0.0;
  std::size_t wer_errors = 0;
  std::size_t wer_ref_length = 0;

  bool operator==(const SongScore&) const = default;
};

// Corpus report. DER and WER are pooled; `wer` is kInfiniteWer when the gold
// corpus has no vocal tokens but the hypotheses do.
struct EvalReport {
  std::size_t songs = 0;
  // Manifest entries that were not ok and therefore not scored.
  std::vector<std::string> skipped;
  double collar_s = 0.0;
  bool score_silence = true;
  double der = 0.0;
  double der_mismatch_s = 0.0;
  double der_total_s = 0.0;
  double wer = 0.0;
  std::size_t wer_substitutions = 0;
  std::size_t wer_deletions = 0;
  std::size_t wer_insertions = 0;
  std::size_t wer_ref_length = 0;
  // Present only when evaluating a manifest with timings and durations.
  std::optional<double> rtf;
  double processing_s = 0.0;
  double audio_s = 0.0;
  std::vector<SongScore> per_song;

  bool operator==(const EvalReport&) const = default;
};

// Pretty JSON. Infinite WER is written as null.
std::string dump_report(const EvalReport& report);
// Throws SchemaError.
EvalReport load_report(std::string_view json_text);

// Two-column text table with DER and WER in percent and RTF to three places.
std::string format_table(const EvalReport& report, std::string_view system = "lyricprep");

// Vocal-section lyrics in section order, joined by single spaces.
std::string vocal_text(const SongAnnotation& ann);

// Scores `hyp` against `gold` (pairs matched by position). Song ids come from
// the gold side.
EvalReport evaluate_pairs(const std::vector<std::pair<SongAnnotation, SongAnnotation>>& pairs,
                          const DerOptions& options = {});

// `hyp` is either a directory of <song_id>.txt structured-lyrics files or a
// manifest whose ok entries point at them (relative to the manifest's
// directory). `gold_dir` holds <song_id>.json gold documents.
// Throws MissingGold listing every hypothesis without gold.
EvalReport evaluate(const std::filesystem::path& hyp, const std::filesystem::path& gold_dir,
                    const DerOptions& options = {});

}  // namespace lyricprep
