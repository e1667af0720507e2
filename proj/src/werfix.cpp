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

#include "lyricprep/werfix.hpp"

#include "lyricprep/textmetrics.hpp"

namespace lyricprep {

FixOutcome fix_lyrics(std::string_view reference, std::string_view hypothesis,
                      LanguageHint hint, double reject_threshold) {
  const TokenSequence ref = tokenize(reference, hint);
  const TokenSequence hyp = tokenize(hypothesis, hint);
  const EditAlignment alignment = edit_align(ref, hyp);

  FixOutcome out;
  out.wer_ref_vs_hyp = wer_from_alignment(alignment).wer;
  if (out.wer_ref_vs_hyp >= reject_threshold) {
    out.status = FixStatus::kRejected;
    return out;
  }

  out.status = FixStatus::kFixed;
  for (const EditOp& op : alignment.ops) {
    switch (op.kind) {
      case EditKind::kMatch:
        out.fixed_tokens.push_back(hyp.tokens[*op.hyp_index]);
        break;
      case EditKind::kSubstitute:
        out.fixed_tokens.push_back(ref.tokens[*op.ref_index]);
        ++out.substitutions_taken;
        break;
      case EditKind::kInsert:
        out.fixed_tokens.push_back(hyp.tokens[*op.hyp_index]);
        ++out.insertions_taken;
        break;
      case EditKind::kDelete:
        ++out.deletions_applied;
        break;
    }
  }
  out.fixed_text = detokenize(out.fixed_tokens, hint);
  return out;
}

DualHeadDecision dual_head_arbitrate(std::string_view hyp_primary, std::string_view hyp_secondary,
                                     LanguageHint hint, double accept_threshold) {
  DualHeadDecision out;
  out.cross_wer = wer(hyp_primary, hyp_secondary, hint).wer;
  out.accepted = out.cross_wer < accept_threshold;
  if (out.accepted) out.chosen = std::string(hyp_primary);
  return out;
}

FilterResult filter_dataset(const std::vector<ManifestEntry>& entries, double max_wer) {
  FilterResult out;
  for (const ManifestEntry& e : entries) {
    if (e.wer_estimate && *e.wer_estimate < max_wer) {
      out.kept.push_back(e);
    } else {
      out.dropped.push_back(e);
    }
  }
  return out;
}

}  // namespace lyricprep
