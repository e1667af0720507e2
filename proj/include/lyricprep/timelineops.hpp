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

#include <map>
#include <string>
#include <vector>

#include "lyricprep/annotation.hpp"

namespace lyricprep {

// A segment as emitted by a structure analyzer, before its label is mapped
// into the seven-label vocabulary.
struct RawSegment {
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string lyric;
};

struct LabelMapping {
  std::map<std::string, StructureLabel> entries;

  // start/end -> silence, break/solo -> inst, the six shared names map to
  // themselves.
  static LabelMapping legacy_default();
};

struct CalibrationParams {
  double min_vocal_coverage = 0.2;
  double min_gap_s = 2.0;
  double pad_s = 0.3;
};

// Throws InvalidInput for negative values or a coverage ratio above one.
void validate_params(const CalibrationParams& params);

// Labels already in the seven-label set pass through unchanged when the
// mapping has no entry for them. Throws UnknownLabel otherwise.
std::vector<Segment> remap_labels(const std::vector<RawSegment>& segments,
                                  const LabelMapping& mapping);

// Sorts, clips to [0, duration_s], fills gaps with silence and merges equal
// neighbours (lyrics joined by one space). Throws InvalidInput on overlap or
// a non-positive duration.
SongAnnotation normalize_timeline(const std::vector<Segment>& segments, double duration_s,
                                  std::string song_id = {});

std::vector<Segment> select_vocal_sections(const SongAnnotation& ann);

// Uses word timings to pull instrumental stretches out of vocal sections.
// A vocal segment whose word coverage is below min_vocal_coverage becomes
// inst and loses its lyric. Otherwise a leading or trailing word-free span
// longer than min_gap_s is cut back to pad_s before the first / after the
// last word and handed to inst. The result is renormalized.
// Throws InvalidInput if `ann` is not normalized or the words are unsorted.
SongAnnotation calibrate_boundaries(const SongAnnotation& ann,
                                    const std::vector<WordAlignment>& words,
                                    const CalibrationParams& params = {});

}  // namespace lyricprep
