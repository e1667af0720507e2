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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lyricprep {

// The closed seven-way structure vocabulary.
enum class StructureLabel { kIntro, kOutro, kInst, kVerse, kChorus, kBridge, kSilence };

inline constexpr std::array<StructureLabel, 7> kAllLabels = {
    StructureLabel::kIntro, StructureLabel::kOutro,  StructureLabel::kInst,
    StructureLabel::kVerse, StructureLabel::kChorus, StructureLabel::kBridge,
    StructureLabel::kSilence};

std::string_view to_string(StructureLabel label);

// Exact, case-sensitive lookup. Returns nullopt for anything outside the set.
std::optional<StructureLabel> label_from_string(std::string_view text);

// Throws UnknownLabel.
StructureLabel parse_label(std::string_view text);

// verse, chorus and bridge carry lyrics; nothing else does.
constexpr bool is_vocal(StructureLabel label) {
  return label == StructureLabel::kVerse || label == StructureLabel::kChorus ||
         label == StructureLabel::kBridge;
}

struct Segment {
  StructureLabel label = StructureLabel::kSilence;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string lyric;

  double duration() const { return end_s - start_s; }
  bool operator==(const Segment&) const = default;
};

struct SongAnnotation {
  std::string song_id;
  std::optional<double> duration_s;
  std::vector<Segment> segments;

  bool operator==(const SongAnnotation&) const = default;
};

enum class LanguageHint { kAuto, kCjk, kLatin };

std::string_view to_string(LanguageHint hint);
// Accepts auto|cjk|latin and the gold-file language tags zh (cjk) / en (latin).
std::optional<LanguageHint> hint_from_string(std::string_view text);

struct TokenSequence {
  std::vector<std::string> tokens;
  LanguageHint language_hint = LanguageHint::kAuto;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const TokenSequence&) const = default;
};

enum class EditKind { kMatch, kSubstitute, kInsert, kDelete };

std::string_view to_string(EditKind kind);

struct EditOp {
  EditKind kind;
  std::optional<std::size_t> ref_index;
  std::optional<std::size_t> hyp_index;

  bool operator==(const EditOp&) const = default;
};

struct EditAlignment {
  std::vector<EditOp> ops;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_length = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  bool operator==(const EditAlignment&) const = default;
};

struct WordAlignment {
  std::string word;
  double start_s = 0.0;
  double end_s = 0.0;
  double score = 1.0;

  bool operator==(const WordAlignment&) const = default;
};

// Tolerance used when checking contiguity and coverage of normalized
// annotations.
inline constexpr double kTimeEpsilon = 1e-9;

// Returns one human-readable entry per broken rule; empty means valid.
// Entries start with "segments[i]" when a segment is at fault.
std::vector<std::string> validate_annotation(const SongAnnotation& ann,
                                             bool require_normalized);

// Throws ValidationError when validate_annotation reports anything.
void require_valid(const SongAnnotation& ann, bool require_normalized);

// Violations for a word list: positive length, sorted, non-overlapping,
// score in [0, 1].
std::vector<std::string> validate_words(const std::vector<WordAlignment>& words);

}  // namespace lyricprep
