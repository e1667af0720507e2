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

#include "lyricprep/annotation.hpp"

#include <cmath>

#include "lyricprep/errors.hpp"

namespace lyricprep {

std::string_view to_string(StructureLabel label) {
  switch (label) {
    case StructureLabel::kIntro: return "intro";
    case StructureLabel::kOutro: return "outro";
    case StructureLabel::kInst: return "inst";
    case StructureLabel::kVerse: return "verse";
    case StructureLabel::kChorus: return "chorus";
    case StructureLabel::kBridge: return "bridge";
    case StructureLabel::kSilence: return "silence";
  }
  return "?";
}

std::optional<StructureLabel> label_from_string(std::string_view text) {
  for (StructureLabel l : kAllLabels) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

StructureLabel parse_label(std::string_view text) {
  if (auto l = label_from_string(text)) return *l;
  throw UnknownLabel(std::string(text));
}

std::string_view to_string(LanguageHint hint) {
  switch (hint) {
    case LanguageHint::kAuto: return "auto";
    case LanguageHint::kCjk: return "cjk";
    case LanguageHint::kLatin: return "latin";
  }
  return "?";
}

std::optional<LanguageHint> hint_from_string(std::string_view text) {
  if (text == "auto") return LanguageHint::kAuto;
  if (text == "cjk" || text == "zh") return LanguageHint::kCjk;
  if (text == "latin" || text == "en") return LanguageHint::kLatin;
  return std::nullopt;
}

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::kMatch: return "match";
    case EditKind::kSubstitute: return "substitute";
    case EditKind::kInsert: return "insert";
    case EditKind::kDelete: return "delete";
  }
  return "?";
}

namespace {

std::string At(std::size_t i) { return "segments[" + std::to_string(i) + "]"; }

}  // namespace

std::vector<std::string> validate_annotation(const SongAnnotation& ann,
                                             bool require_normalized) {
  std::vector<std::string> out;
  const auto& segs = ann.segments;

  if (ann.duration_s && !(*ann.duration_s > 0.0 && std::isfinite(*ann.duration_s))) {
    out.push_back("duration_s must be positive");
  }

  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    if (!std::isfinite(s.start_s) || !std::isfinite(s.end_s)) {
      out.push_back(At(i) + ": non-finite time");
      continue;
    }
    if (s.start_s < 0.0) out.push_back(At(i) + ": start_s is negative");
    if (!(s.start_s < s.end_s)) out.push_back(At(i) + ": start_s >= end_s");
    if (!is_vocal(s.label) && !s.lyric.empty()) {
      out.push_back(At(i) + ": lyric on non-vocal label " +
                    std::string(to_string(s.label)));
    }
    if (i > 0) {
      const Segment& prev = segs[i - 1];
      if (s.start_s < prev.start_s) {
        out.push_back(At(i) + ": out of order (starts before segments[" +
                      std::to_string(i - 1) + "])");
      } else if (s.start_s < prev.end_s) {
        out.push_back(At(i) + ": overlaps segments[" + std::to_string(i - 1) + "]");
      }
    }
  }

  if (!require_normalized) return out;

  if (!ann.duration_s) {
    out.push_back("normalized annotation requires duration_s");
  }
  if (segs.empty()) {
    out.push_back("normalized annotation has no segments");
    return out;
  }
  if (std::abs(segs.front().start_s) > kTimeEpsilon) {
    out.push_back(At(0) + ": normalized timeline must start at 0");
  }
  if (ann.duration_s && std::abs(segs.back().end_s - *ann.duration_s) > kTimeEpsilon) {
    out.push_back(At(segs.size() - 1) + ": normalized timeline must end at duration_s");
  }
  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (std::abs(segs[i].start_s - segs[i - 1].end_s) > kTimeEpsilon) {
      out.push_back(At(i) + ": gap or overlap with previous segment");
    }
    if (segs[i].label == segs[i - 1].label) {
      out.push_back(At(i) + ": same label as previous segment");
    }
  }
  return out;
}

void require_valid(const SongAnnotation& ann, bool require_normalized) {
  auto v = validate_annotation(ann, require_normalized);
  if (!v.empty()) throw ValidationError(std::move(v));
}

std::vector<std::string> validate_words(const std::vector<WordAlignment>& words) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    const std::string at = "words[" + std::to_string(i) + "]";
    if (!(w.start_s < w.end_s)) out.push_back(at + ": start_s >= end_s");
    if (!(w.score >= 0.0 && w.score <= 1.0)) out.push_back(at + ": score outside [0, 1]");
    if (i > 0 && w.start_s < words[i - 1].end_s) {
      out.push_back(at + ": unsorted or overlapping");
    }
  }
  return out;
}

}  // namespace lyricprep
