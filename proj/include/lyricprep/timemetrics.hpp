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
#include <utility>
#include <vector>

#include "lyricprep/annotation.hpp"

namespace lyricprep {

struct DerOptions {
  // Half-width of the window excluded around every reference boundary.
  double collar_s = 0.0;
  // When false, time where the reference is silence (or a gap) is not scored.
  bool score_silence = true;
};

using LabelPair = std::pair<StructureLabel, StructureLabel>;

struct DerReport {
  double der = 0.0;
  double mismatch_s = 0.0;
  double total_s = 0.0;
  // (reference label, hypothesis label) -> scored seconds. Cells sum to
  // total_s; off-diagonal cells sum to mismatch_s.
  std::map<LabelPair, double> per_label_confusion;
};

// Labeled-frame mismatch rate over [0, ref.duration_s]. Gaps in either
// timeline count as silence, hypothesis time outside the reference span is
// clipped, and labels are compared as fixed categories (no label mapping).
// Throws InvalidInput when the reference has no duration, the collar is
// negative, or the collar leaves nothing to score.
DerReport der(const SongAnnotation& ref, const SongAnnotation& hyp,
              const DerOptions& options = {});

// Pools mismatch and scored time over songs, then divides once.
DerReport corpus_der(const std::vector<std::pair<SongAnnotation, SongAnnotation>>& pairs,
                     const DerOptions& options = {});

struct RtfReport {
  double processing_s = 0.0;
  double audio_s = 0.0;
  double rtf = 0.0;
};

// Throws InvalidInput unless audio_s > 0 and processing_s >= 0.
RtfReport rtf(double processing_s, double audio_s);

}  // namespace lyricprep
