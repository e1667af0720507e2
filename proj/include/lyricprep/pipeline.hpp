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

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lyricprep/backend.hpp"
#include "lyricprep/config.hpp"
#include "lyricprep/manifest.hpp"

namespace lyricprep {

struct SongInput {
  std::string song_id;
  std::string audio_path;
  std::optional<std::string> reference_lyrics;
};

// JSON lines of {"song_id", "audio_path", "reference_lyrics"?}. Throws
// SchemaError with the line number.
std::vector<SongInput> load_inputs(std::string_view jsonl);

struct PipelineBackends {
  std::unique_ptr<Backend> separate;
  std::unique_ptr<Backend> structure;
  std::vector<std::unique_ptr<Backend>> transcribe;
  std::unique_ptr<Backend> align;

  static PipelineBackends from_config(const PipelineConfig& config);
};

// Manifest file name inside the output directory.
inline constexpr const char* kManifestFile = "manifest.jsonl";

// Runs songs through separate -> structure -> label remap + normalize ->
// per-section transcription -> lyric repair or dual-head arbitration ->
// word alignment -> boundary calibration -> structured-lyrics output.
// A failing stage marks only that song as failed.
class Pipeline {
 public:
  // Throws ConfigError.
  explicit Pipeline(PipelineConfig config);
  Pipeline(PipelineConfig config, PipelineBackends backends);

  // Processes one song and writes its structured lyrics into output_dir.
  // Never throws for per-song problems.
  ManifestEntry process_song(const SongInput& input);

  // Processes all songs on worker_count threads and writes
  // output_dir/manifest.jsonl. Entries come back in input order.
  std::vector<ManifestEntry> run(const std::vector<SongInput>& inputs);

  const PipelineConfig& config() const { return config_; }

 private:
  BackendRequest Request(const char* op, const std::string& song_id, const std::string& audio) {
    BackendRequest r;
    r.op = op;
    r.song_id = song_id;
    r.audio_path = audio;
    r.seq = next_seq_++;
    return r;
  }

  PipelineConfig config_;
  PipelineBackends backends_;
  std::atomic<std::uint64_t> next_seq_{1};
};

std::vector<ManifestEntry> run_pipeline(const PipelineConfig& config,
                                        const std::vector<SongInput>& inputs);

// Copy with every timing value zeroed, for comparisons across runs.
ManifestEntry mask_timings(ManifestEntry entry);

}  // namespace lyricprep
