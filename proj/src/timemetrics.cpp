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

#include "lyricprep/timemetrics.hpp"

#include <algorithm>
#include <cmath>

#include "lyricprep/errors.hpp"

namespace lyricprep {

namespace {

struct Span {
  double start;
  double end;
  StructureLabel label;
};

// Clips to [0, duration] and fills gaps with silence.
std::vector<Span> Materialize(const std::vector<Segment>& segments, double duration) {
  std::vector<Segment> sorted = segments;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Segment& a, const Segment& b) { return a.start_s < b.start_s; });
  std::vector<Span> out;
  double cursor = 0.0;
  for (const Segment& s : sorted) {
    const double start = std::max({s.start_s, cursor, 0.0});
    const double end = std::min(s.end_s, duration);
    if (!(start < end)) continue;
    if (cursor < start) out.push_back({cursor, start, StructureLabel::kSilence});
    out.push_back({start, end, s.label});
    cursor = end;
  }
  if (cursor < duration) out.push_back({cursor, duration, StructureLabel::kSilence});
  return out;
}

StructureLabel LabelAt(const std::vector<Span>& timeline, double t) {
  auto it = std::upper_bound(timeline.begin(), timeline.end(), t,
                             [](double v, const Span& s) { return v < s.start; });
  if (it == timeline.begin()) return StructureLabel::kSilence;
  return std::prev(it)->label;
}

std::vector<std::pair<double, double>> CollarWindows(const SongAnnotation& ref, double duration,
                                                     double collar) {
  std::vector<std::pair<double, double>> windows;
  if (collar <= 0.0) return windows;
  for (const Segment& s : ref.segments) {
    for (double b : {s.start_s, s.end_s}) {
      const double clipped = std::clamp(b, 0.0, duration);
      windows.emplace_back(std::max(0.0, clipped - collar), std::min(duration, clipped + collar));
    }
  }
  std::sort(windows.begin(), windows.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, w.second);
    } else {
      merged.push_back(w);
    }
  }
  return merged;
}

bool Excluded(const std::vector<std::pair<double, double>>& windows, double t) {
  auto it = std::upper_bound(windows.begin(), windows.end(), t,
                             [](double v, const auto& w) { return v < w.first; });
  return it != windows.begin() && t < std::prev(it)->second;
}

}  // namespace

DerReport der(const SongAnnotation& ref, const SongAnnotation& hyp, const DerOptions& options) {
  if (!ref.duration_s || !(*ref.duration_s > 0.0)) {
    throw InvalidInput("der: reference " + ref.song_id + " has no positive duration_s");
  }
  if (!(options.collar_s >= 0.0)) throw InvalidInput("der: collar must be non-negative");
  const double duration = *ref.duration_s;

  const auto ref_tl = Materialize(ref.segments, duration);
  const auto hyp_tl = Materialize(hyp.segments, duration);
  const auto windows = CollarWindows(ref, duration, options.collar_s);

  std::vector<double> points = {0.0, duration};
  for (const auto* tl : {&ref_tl, &hyp_tl}) {
    for (const Span& s : *tl) {
      points.push_back(s.start);
      points.push_back(s.end);
    }
  }
  for (const auto& w : windows) {
    points.push_back(w.first);
    points.push_back(w.second);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  DerReport report;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double a = points[k];
    const double b = points[k + 1];
    if (a < 0.0 || b > duration || !(a < b)) continue;
    const double mid = 0.5 * (a + b);
    if (Excluded(windows, mid)) continue;
    const StructureLabel r = LabelAt(ref_tl, mid);
    if (!options.score_silence && r == StructureLabel::kSilence) continue;
    const StructureLabel h = LabelAt(hyp_tl, mid);
    const double len = b - a;
    report.total_s += len;
    report.per_label_confusion[{r, h}] += len;
    if (r != h) report.mismatch_s += len;
  }
  if (!(report.total_s > 0.0)) {
    throw InvalidInput("der: nothing left to score for " + ref.song_id +
                       " (collar or silence exclusion covers the timeline)");
  }
  report.der = report.mismatch_s / report.total_s;
  return report;
}

DerReport corpus_der(const std::vector<std::pair<SongAnnotation, SongAnnotation>>& pairs,
                     const DerOptions& options) {
  DerReport pooled;
  for (const auto& [ref, hyp] : pairs) {
    const DerReport r = der(ref, hyp, options);
    pooled.mismatch_s += r.mismatch_s;
    pooled.total_s += r.total_s;
    for (const auto& [cell, secs] : r.per_label_confusion) pooled.per_label_confusion[cell] += secs;
  }
  if (!(pooled.total_s > 0.0)) throw InvalidInput("corpus_der: empty corpus");
  pooled.der = pooled.mismatch_s / pooled.total_s;
  return pooled;
}

RtfReport rtf(double processing_s, double audio_s) {
  if (!(audio_s > 0.0)) throw InvalidInput("rtf: audio_s must be positive");
  if (!(processing_s >= 0.0)) throw InvalidInput("rtf: processing_s must be non-negative");
  return {processing_s, audio_s, processing_s / audio_s};
}

}  // namespace lyricprep
