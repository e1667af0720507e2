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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lyricprep/backend.hpp"
#include "lyricprep/timelineops.hpp"
#include "lyricprep/timemetrics.hpp"
#include "lyricprep/werfix.hpp"

namespace lyricprep {

enum class PipelineMode { kWithReferenceLyrics, kDualHead };

std::string_view to_string(PipelineMode mode);

struct PipelineConfig {
  // One endpoint each for separate, structure and align; one or two
  // transcription heads (two required in dual-head mode).
  std::map<std::string, std::vector<EndpointSpec>> backends;
  double backend_timeout_s = 300.0;
  LabelMapping label_mapping = LabelMapping::legacy_default();
  CalibrationParams calibration;
  double reject_threshold = kDefaultRejectThreshold;
  double accept_threshold = kDefaultAcceptThreshold;
  double filter_max_wer = 0.3;
  DerOptions der;
  LanguageHint language_hint = LanguageHint::kAuto;
  int worker_count = 1;
  std::filesystem::path output_dir = "out";
  PipelineMode mode = PipelineMode::kWithReferenceLyrics;
};

// Prefix of environment variables that override config keys. The rest of the
// variable name is the lower-cased key path with "__" between levels, e.g.
// LYRICPREP_WORKER_COUNT=8 or LYRICPREP_CALIBRATION__PAD_S=0.5.
inline constexpr std::string_view kEnvPrefix = "LYRICPREP_";

// Parses a YAML config document and applies `env` overrides (only entries
// starting with kEnvPrefix are considered). Unknown keys and invalid values
// throw ConfigError.
PipelineConfig load_config(std::string_view yaml_text,
                           const std::map<std::string, std::string>& env = {});

// Reads the file and the process environment.
PipelineConfig load_config_file(const std::filesystem::path& path);

std::map<std::string, std::string> process_environment();

// Throws ConfigError naming the first problem.
void validate_config(const PipelineConfig& config);

}  // namespace lyricprep
