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

#include "lyricprep/textmetrics.hpp"

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace lyricprep {

namespace {

enum class CharClass { kSeparator, kStripped, kWord };

CharClass Classify(UChar32 cp) {
  if (u_isUWhiteSpace(cp)) return CharClass::kSeparator;
  switch (u_charType(cp)) {
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return CharClass::kStripped;
    case U_CONTROL_CHAR:
    case U_FORMAT_CHAR:
    case U_LINE_SEPARATOR:
    case U_PARAGRAPH_SEPARATOR:
    case U_SPACE_SEPARATOR:
      return CharClass::kSeparator;
    default:
      return CharClass::kWord;
  }
}

void AppendUtf8(std::string& out, UChar32 cp) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, cp, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

// Decodes one codepoint starting at `i`; malformed bytes decode to U+FFFD.
UChar32 NextCodepoint(std::string_view text, int32_t& i) {
  UChar32 cp = 0;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto n = static_cast<int32_t>(text.size());
  U8_NEXT(s, i, n, cp);
  return cp < 0 ? 0xFFFD : cp;
}

bool IsSingleCjkToken(const std::string& token) {
  int32_t i = 0;
  const UChar32 cp = NextCodepoint(token, i);
  return i == static_cast<int32_t>(token.size()) && is_cjk_codepoint(static_cast<char32_t>(cp));
}

}  // namespace

bool is_cjk_codepoint(char32_t cp) {
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode script = uscript_getScript(static_cast<UChar32>(cp), &status);
  if (U_FAILURE(status)) return false;
  return script == USCRIPT_HAN || script == USCRIPT_HIRAGANA || script == USCRIPT_KATAKANA ||
         script == USCRIPT_BOPOMOFO || script == USCRIPT_HANGUL;
}

TokenSequence tokenize(std::string_view text, LanguageHint hint) {
  TokenSequence out;
  out.language_hint = hint;
  std::string run;
  auto flush = [&] {
    if (!run.empty()) out.tokens.push_back(std::move(run));
    run.clear();
  };

  int32_t i = 0;
  const auto n = static_cast<int32_t>(text.size());
  while (i < n) {
    const UChar32 cp = NextCodepoint(text, i);
    switch (Classify(cp)) {
      case CharClass::kSeparator:
        flush();
        break;
      case CharClass::kStripped:
        break;
      case CharClass::kWord: {
        const UChar32 folded = u_foldCase(cp, U_FOLD_CASE_DEFAULT);
        const bool single = hint == LanguageHint::kCjk ||
                            (hint == LanguageHint::kAuto &&
                             is_cjk_codepoint(static_cast<char32_t>(cp)));
        if (single) {
          flush();
          AppendUtf8(run, folded);
          flush();
        } else {
          AppendUtf8(run, folded);
        }
        break;
      }
    }
  }
  flush();
  return out;
}

std::string detokenize(const std::vector<std::string>& tokens, LanguageHint hint) {
  std::string out;
  bool prev_cjk = false;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const bool cjk = hint != LanguageHint::kLatin && IsSingleCjkToken(tokens[k]);
    if (k > 0 && !(prev_cjk && cjk)) out += ' ';
    out += tokens[k];
    prev_cjk = cjk;
  }
  return out;
}

EditAlignment edit_align(const TokenSequence& ref, const TokenSequence& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  // Lexicographic (edits, insertions + deletions) packed into one integer:
  // among minimal scripts the one with the fewest gaps wins, which makes S
  // symmetric under swapping ref and hyp.
  const std::size_t kEdit = n + m + 1;
  const std::size_t kSub = kEdit;
  const std::size_t kGap = kEdit + 1;
  std::vector<std::size_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * width + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i * kGap;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j * kGap;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (ref.tokens[i - 1] == hyp.tokens[j - 1] ? 0 : kSub);
      at(i, j) = std::min({diag, at(i - 1, j) + kGap, at(i, j - 1) + kGap});
    }
  }

  EditAlignment out;
  out.ref_length = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0) {
      const bool same = ref.tokens[i - 1] == hyp.tokens[j - 1];
      if (same && at(i - 1, j - 1) == here) {
        out.ops.push_back({EditKind::kMatch, i - 1, j - 1});
        --i, --j;
        continue;
      }
      if (!same && at(i - 1, j - 1) + kSub == here) {
        out.ops.push_back({EditKind::kSubstitute, i - 1, j - 1});
        ++out.substitutions;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && at(i - 1, j) + kGap == here) {
      out.ops.push_back({EditKind::kDelete, i - 1, std::nullopt});
      ++out.deletions;
      --i;
      continue;
    }
    out.ops.push_back({EditKind::kInsert, std::nullopt, j - 1});
    ++out.insertions;
    --j;
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

WerReport wer_from_alignment(const EditAlignment& alignment) {
  WerReport r;
  r.substitutions = alignment.substitutions;
  r.deletions = alignment.deletions;
  r.insertions = alignment.insertions;
  r.ref_length = alignment.ref_length;
  if (r.ref_length > 0) {
    r.wer = static_cast<double>(r.errors()) / static_cast<double>(r.ref_length);
  } else {
    r.wer = r.insertions == 0 ? 0.0 : kInfiniteWer;
  }
  return r;
}

WerReport wer(std::string_view ref, std::string_view hyp, LanguageHint hint) {
  return wer_from_alignment(edit_align(tokenize(ref, hint), tokenize(hyp, hint)));
}

WerReport corpus_wer(const std::vector<WerPair>& pairs) {
  EditAlignment pooled;
  for (const auto& [ref, hyp, hint] : pairs) {
    const WerReport r = wer(ref, hyp, hint);
    pooled.substitutions += r.substitutions;
    pooled.deletions += r.deletions;
    pooled.insertions += r.insertions;
    pooled.ref_length += r.ref_length;
  }
  return wer_from_alignment(pooled);
}

}  // namespace lyricprep
