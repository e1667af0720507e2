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

#include <string>
#include <string_view>
#include <vector>

#include "lyricprep/annotation.hpp"
#include "lyricprep/manifest.hpp"

namespace lyricprep {

// Structured-lyrics text: one segment per line,
//
//   [label][start:end]lyric
//
// with times as `digits("." digits)?` seconds. Blank lines are skipped.
// Lyrics run from the second closing bracket to end of line and are trimmed,
// so they may themselves contain brackets. Non-vocal lines must not carry a
// lyric, and a CR is only accepted as part of a CRLF line ending. Throws ParseError (1-based line and column).
SongAnnotation parse_structured_lyrics(std::string_view text);

// Canonical form: one line per segment, one-decimal times rounded half-up,
// trailing newline; the empty annotation serializes to "".
// Throws ValidationError if `ann` is invalid or a lyric contains a line break.
std::string serialize_structured_lyrics(const SongAnnotation& ann);

// Decimal half-up rounding of the shortest round-trip representation, so
// 7.25 -> "7.3" and 0.15 -> "0.2".
std::string format_time(double seconds);

// Gold annotation JSON:
//   {"song_id", "duration_s", "language": "zh"|"en"|"auto",
//    "segments": [{"label", "start_s", "end_s", "lyric"}]}
// `language` and per-segment `lyric` are optional. Throws SchemaError naming
// the offending field, or ValidationError if the timeline is invalid.
struct GoldDocument {
  SongAnnotation annotation;
  std::string language = "auto";
};

GoldDocument load_gold_document(std::string_view json_text);
SongAnnotation load_gold_annotation(std::string_view json_text);
std::string dump_gold_annotation(const SongAnnotation& ann,
                                 std::string_view language = "auto");

// JSON-lines manifest with sorted keys. Non-finite quality values are written
// as null. Throws SchemaError carrying the 1-based line number.
std::string dump_manifest(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> load_manifest(std::string_view text);

}  // namespace lyricprep
