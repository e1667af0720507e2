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
#include <limits>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "lyricprep/annotation.hpp"

namespace lyricprep {

// Sentinel WER for an empty reference against a non-empty hypothesis.
inline constexpr double kInfiniteWer = std::numeric_limits<double>::infinity();

struct WerReport {
  double wer = 0.0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_length = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
};

// Case-folds, strips Unicode punctuation (P*) and symbols (S*), then splits.
// kAuto: each CJK codepoint is its own token and maximal runs of other
// letters/digits form word tokens. kCjk: every codepoint is a token.
// kLatin: CJK codepoints join the surrounding word runs.
TokenSequence tokenize(std::string_view text, LanguageHint hint);

// True for codepoints of the Han, Hiragana, Katakana, Bopomofo and Hangul
// scripts.
bool is_cjk_codepoint(char32_t cp);

// Inverse of tokenize for canonical text: tokens joined with single spaces,
// except that two adjacent single-codepoint CJK tokens are joined directly
// (never under kLatin).
std::string detokenize(const std::vector<std::string>& tokens, LanguageHint hint);

// Minimal unit-cost alignment. Among minimal scripts the one with the fewest
// insertions + deletions is taken; remaining ties are broken during the
// backtrace from the end, preferring match > substitute > delete > insert.
EditAlignment edit_align(const TokenSequence& ref, const TokenSequence& hyp);

// Builds the report for an alignment. N == 0 yields 0 for an empty
// hypothesis and kInfiniteWer otherwise.
WerReport wer_from_alignment(const EditAlignment& alignment);

WerReport wer(std::string_view ref, std::string_view hyp, LanguageHint hint);

// Pooled corpus WER: sums S, D, I and N over all pairs and divides once.
using WerPair = std::tuple<std::string, std::string, LanguageHint>;
WerReport corpus_wer(const std::vector<WerPair>& pairs);

}  // namespace lyricprep
