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

#include "lyricprep/timelineops.hpp"

#include <algorithm>
#include <cmath>

#include "lyricprep/errors.hpp"

namespace lyricprep {

LabelMapping LabelMapping::legacy_default() {
  LabelMapping m;
  m.entries = {
      {"start", StructureLabel::kSilence}, {"end", StructureLabel::kSilence},
      {"break", StructureLabel::kInst},    {"solo", StructureLabel::kInst},
      {"intro", StructureLabel::kIntro},   {"outro", StructureLabel::kOutro},
      {"inst", StructureLabel::kInst},     {"verse", StructureLabel::kVerse},
      {"chorus", StructureLabel::kChorus}, {"bridge", StructureLabel::kBridge},
  };
  return m;
}

void validate_params(const CalibrationParams& p) {
  if (!(p.min_vocal_coverage >= 0.0 && p.min_vocal_coverage <= 1.0)) {
    throw InvalidInput("calibration: min_vocal_coverage must lie in [0, 1]");
  }
  if (!(p.min_gap_s >= 0.0)) throw InvalidInput("calibration: min_gap_s must be non-negative");
  if (!(p.pad_s >= 0.0)) throw InvalidInput("calibration: pad_s must be non-negative");
}

std::vector<Segment> remap_labels(const std::vector<RawSegment>& segments,
                                  const LabelMapping& mapping) {
  std::vector<Segment> out;
  out.reserve(segments.size());
  for (const RawSegment& raw : segments) {
    StructureLabel label;
    if (auto it = mapping.entries.find(raw.label); it != mapping.entries.end()) {
      label = it->second;
    } else if (auto own = label_from_string(raw.label)) {
      label = *own;
    } else {
      throw UnknownLabel(raw.label);
    }
    out.push_back({label, raw.start_s, raw.end_s, raw.lyric});
  }
  return out;
}

namespace {

void AppendLyric(std::string& into, const std::string& part) {
  if (part.empty()) return;
  if (!into.empty()) into += ' ';
  into += part;
}

}  // namespace

SongAnnotation normalize_timeline(const std::vector<Segment>& segments, double duration_s,
                                  std::string song_id) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidInput("normalize_timeline: duration must be positive");
  }
  std::vector<Segment> sorted = segments;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Segment& a, const Segment& b) { return a.start_s < b.start_s; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].start_s < sorted[i].end_s)) {
      throw InvalidInput("normalize_timeline: segment with start >= end at " +
                         std::to_string(sorted[i].start_s));
    }
    if (i > 0 && sorted[i].start_s < sorted[i - 1].end_s - kTimeEpsilon) {
      throw InvalidInput("normalize_timeline: overlapping segments at " +
                         std::to_string(sorted[i].start_s));
    }
  }

  SongAnnotation out;
  out.song_id = std::move(song_id);
  out.duration_s = duration_s;
  auto push = [&](StructureLabel label, double start, double end, const std::string& lyric) {
    if (!(start < end)) return;
    if (!out.segments.empty() && out.segments.back().label == label) {
      out.segments.back().end_s = end;
      AppendLyric(out.segments.back().lyric, lyric);
      return;
    }
    Segment s{label, start, end, {}};
    AppendLyric(s.lyric, lyric);
    out.segments.push_back(std::move(s));
  };

  double cursor = 0.0;
  for (const Segment& s : sorted) {
    // Sub-epsilon gaps and overlaps snap to the previous boundary.
    double start = std::max(s.start_s, 0.0);
    if (std::abs(start - cursor) <= kTimeEpsilon) start = cursor;
    const double end = std::min(s.end_s, duration_s);
    if (!(start < end)) continue;
    push(StructureLabel::kSilence, cursor, start, {});
    push(s.label, start, end, is_vocal(s.label) ? s.lyric : std::string());
    cursor = end;
  }
  if (!out.segments.empty() && duration_s - cursor <= kTimeEpsilon) {
    out.segments.back().end_s = duration_s;
  } else {
    push(StructureLabel::kSilence, cursor, duration_s, {});
  }
  return out;
}

std::vector<Segment> select_vocal_sections(const SongAnnotation& ann) {
  std::vector<Segment> out;
  std::copy_if(ann.segments.begin(), ann.segments.end(), std::back_inserter(out),
               [](const Segment& s) { return is_vocal(s.label); });
  return out;
}

SongAnnotation calibrate_boundaries(const SongAnnotation& ann,
                                    const std::vector<WordAlignment>& words,
                                    const CalibrationParams& params) {
  validate_params(params);
  if (auto v = validate_annotation(ann, true); !v.empty()) {
    throw InvalidInput("calibrate_boundaries: annotation not normalized: " + v.front());
  }
  if (auto v = validate_words(words); !v.empty()) {
    throw InvalidInput("calibrate_boundaries: " + v.front());
  }

  std::vector<Segment> pieces;
  for (const Segment& seg : ann.segments) {
    if (!is_vocal(seg.label)) {
      pieces.push_back(seg);
      continue;
    }
    // Words are sorted and disjoint, so the overlapping ones form a run.
    auto first = std::lower_bound(words.begin(), words.end(), seg.start_s,
                                  [](const WordAlignment& w, double t) { return w.end_s <= t; });
    double covered = 0.0;
    double first_start = seg.end_s;
    double last_end = seg.start_s;
    for (auto it = first; it != words.end() && it->start_s < seg.end_s; ++it) {
      const double a = std::max(it->start_s, seg.start_s);
      const double b = std::min(it->end_s, seg.end_s);
      if (!(a < b)) continue;
      covered += b - a;
      first_start = std::min(first_start, a);
      last_end = std::max(last_end, b);
    }

    if (covered / seg.duration() < params.min_vocal_coverage) {
      pieces.push_back({StructureLabel::kInst, seg.start_s, seg.end_s, {}});
      continue;
    }
    if (!(covered > 0.0)) {
      pieces.push_back(seg);
      continue;
    }
    double start = seg.start_s;
    double end = seg.end_s;
    if (first_start - seg.start_s > params.min_gap_s) {
      start = std::max(seg.start_s, first_start - params.pad_s);
    }
    if (seg.end_s - last_end > params.min_gap_s) {
      end = std::min(seg.end_s, last_end + params.pad_s);
    }
    if (seg.start_s < start) pieces.push_back({StructureLabel::kInst, seg.start_s, start, {}});
    pieces.push_back({seg.label, start, end, seg.lyric});
    if (end < seg.end_s) pieces.push_back({StructureLabel::kInst, end, seg.end_s, {}});
  }
  return normalize_timeline(pieces, *ann.duration_s, ann.song_id);
}

}  // namespace lyricprep
