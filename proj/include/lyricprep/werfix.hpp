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

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lyricprep/annotation.hpp"
#include "lyricprep/manifest.hpp"

namespace lyricprep {

inline constexpr double kDefaultRejectThreshold = 0.7;
inline constexpr double kDefaultAcceptThreshold = 0.5;

enum class FixStatus { kFixed, kRejected };

struct FixOutcome {
  FixStatus status = FixStatus::kRejected;
  std::string fixed_text;  // empty unless kFixed
  double wer_ref_vs_hyp = 0.0;
  std::size_t substitutions_taken = 0;
  std::size_t insertions_taken = 0;
  std::size_t deletions_applied = 0;
  // Tokens of fixed_text; one per hypothesis token.
  std::vector<std::string> fixed_tokens;
};

// Lyric repair against an ASR hypothesis. Rejects when WER(ref, hyp) reaches
// reject_threshold. Otherwise walks the alignment: matches keep the token,
// substitutions take the reference token, insertions keep the hypothesis
// token and deletions drop the reference token, so the result has exactly
// the hypothesis's token count.
FixOutcome fix_lyrics(std::string_view reference, std::string_view hypothesis,
                      LanguageHint hint, double reject_threshold = kDefaultRejectThreshold);

struct DualHeadDecision {
  std::string chosen;
  double cross_wer = 0.0;
  bool accepted = false;
};

// Agreement gate between two recognizers: the primary transcript is kept iff
// WER(primary as reference, secondary) < accept_threshold.
DualHeadDecision dual_head_arbitrate(std::string_view hyp_primary, std::string_view hyp_secondary,
                                     LanguageHint hint,
                                     double accept_threshold = kDefaultAcceptThreshold);

struct FilterResult {
  std::vector<ManifestEntry> kept;
  std::vector<ManifestEntry> dropped;
};

// Keeps entries whose wer_estimate is present and strictly below max_wer,
// preserving input order in both outputs.
FilterResult filter_dataset(const std::vector<ManifestEntry>& entries, double max_wer);

}  // namespace lyricprep
