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
#include <optional>
#include <string>
#include <string_view>

namespace lyricprep {

enum class SongStatus { kOk, kRejected, kFailed };

std::string_view to_string(SongStatus status);
std::optional<SongStatus> status_from_string(std::string_view text);

// One song's pipeline record. Serialized as one JSON line with sorted keys.
struct ManifestEntry {
  std::string song_id;
  std::string audio_path;
  // Stage name -> artifact path (relative to the manifest's directory) or an
  // inline text artifact.
  std::map<std::string, std::string> stage_outputs;
  std::optional<double> wer_estimate;
  std::optional<double> cross_wer;
  // Audio length as reported by the structure stage; RTF denominator.
  std::optional<double> duration_s;
  std::map<std::string, double> timings_s;
  SongStatus status = SongStatus::kOk;
  std::optional<std::string> reject_reason;

  double processing_s() const {
    double total = 0.0;
    for (const auto& [stage, secs] : timings_s) total += secs;
    return total;
  }

  bool operator==(const ManifestEntry&) const = default;
};

}  // namespace lyricprep
