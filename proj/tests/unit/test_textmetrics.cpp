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

#include <cmath>
#include <random>

#include "doctest.h"
#include "lyricprep/textmetrics.hpp"
#include "../oracles.hpp"

using namespace lyricprep;

namespace {

TokenSequence Seq(std::vector<std::string> t) { return {std::move(t), LanguageHint::kAuto}; }

std::vector<EditKind> Kinds(const EditAlignment& a) {
  std::vector<EditKind> out;
  for (const auto& op : a.ops) out.push_back(op.kind);
  return out;
}

}  // namespace

TEST_CASE("tokenize examples") {
  using V = std::vector<std::string>;
  CHECK(tokenize("Hello, World!", LanguageHint::kAuto).tokens == V{"hello", "world"});
  CHECK(tokenize("我爱你 baby", LanguageHint::kAuto).tokens == V{"我", "爱", "你", "baby"});
  CHECK(tokenize("", LanguageHint::kAuto).tokens.empty());
  CHECK(tokenize("  \t\n ", LanguageHint::kAuto).tokens.empty());
}

TEST_CASE("tokenize details") {
  using V = std::vector<std::string>;
  CHECK(tokenize("don't stop", LanguageHint::kAuto).tokens == V{"dont", "stop"});
  CHECK(tokenize("STRASSE Straße", LanguageHint::kLatin).tokens.size() == 2);
  CHECK(tokenize("我爱baby你", LanguageHint::kAuto).tokens == V{"我", "爱", "baby", "你"});
  CHECK(tokenize("我爱baby", LanguageHint::kLatin).tokens == V{"我爱baby"});
  CHECK(tokenize("ab cd", LanguageHint::kCjk).tokens == V{"a", "b", "c", "d"});
  CHECK(tokenize("こんにちは", LanguageHint::kAuto).tokens.size() == 5);
  CHECK(tokenize("♪ la ♪ 1,000", LanguageHint::kAuto).tokens == V{"la", "1000"});
  CHECK(tokenize("x\xe2\x80\x8by", LanguageHint::kAuto).tokens == V{"x", "y"});
}

TEST_CASE("detokenize") {
  CHECK(detokenize({"我", "爱", "你", "baby"}, LanguageHint::kAuto) == "我爱你 baby");
  CHECK(detokenize({"hello", "world"}, LanguageHint::kAuto) == "hello world");
  CHECK(detokenize({}, LanguageHint::kAuto) == "");
  CHECK(detokenize({"我", "爱"}, LanguageHint::kLatin) == "我 爱");
}

TEST_CASE("tokenizer idempotence") {
  std::mt19937_64 rng(3);
  const char* pieces[] = {"Hello", ",", " ", "我", "爱", "WORLD", "!", "ça", "va", "\t", "-", "'s"};
  std::uniform_int_distribution<int> pick(0, 11);
  for (int i = 0; i < 300; ++i) {
    std::string text;
    for (int k = 0; k < 12; ++k) text += pieces[pick(rng)];
    for (auto hint : {LanguageHint::kAuto, LanguageHint::kCjk, LanguageHint::kLatin}) {
      const auto once = tokenize(text, hint).tokens;
      CHECK(tokenize(oracle::Join(once), hint).tokens == once);
      CHECK(tokenize(detokenize(once, hint), hint).tokens == once);
    }
  }
}

TEST_CASE("edit_align examples") {
  const auto a = edit_align(Seq({"a", "b", "c", "d"}), Seq({"a", "x", "c"}));
  CHECK(Kinds(a) == std::vector<EditKind>{EditKind::kMatch, EditKind::kSubstitute, EditKind::kMatch,
                                          EditKind::kDelete});
  CHECK(a.substitutions == 1);
  CHECK(a.deletions == 1);
  CHECK(a.insertions == 0);
  CHECK(a.ref_length == 4);
  CHECK(oracle::ExhaustiveMinCost({"a", "b", "c", "d"}, {"a", "x", "c"}) == 2);

  const auto ins = edit_align(Seq({}), Seq({"x"}));
  CHECK(Kinds(ins) == std::vector<EditKind>{EditKind::kInsert});
  CHECK(ins.insertions == 1);

  const auto same = edit_align(Seq({"p", "q", "p"}), Seq({"p", "q", "p"}));
  CHECK(same.errors() == 0);
  CHECK(same.ops.size() == 3);
}

TEST_CASE("edit_align op indices walk both sequences") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto r = oracle::RandomTokens(rng, 8, 3);
    const auto h = oracle::RandomTokens(rng, 8, 3);
    const auto a = edit_align(Seq(r), Seq(h));
    std::size_t ri = 0, hi = 0;
    for (const auto& op : a.ops) {
      if (op.kind != EditKind::kInsert) CHECK(op.ref_index == ri++);
      if (op.kind != EditKind::kDelete) CHECK(op.hyp_index == hi++);
      if (op.kind == EditKind::kMatch) CHECK(r[*op.ref_index] == h[*op.hyp_index]);
      if (op.kind == EditKind::kSubstitute) CHECK(r[*op.ref_index] != h[*op.hyp_index]);
    }
    CHECK(ri == r.size());
    CHECK(hi == h.size());
  }
}

TEST_CASE("edit cost properties") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto x = oracle::RandomTokens(rng, 10, 4);
    const auto y = oracle::RandomTokens(rng, 10, 4);
    const auto z = oracle::RandomTokens(rng, 10, 4);
    const auto xy = edit_align(Seq(x), Seq(y));
    const auto yx = edit_align(Seq(y), Seq(x));
    CHECK(xy.errors() == yx.errors());
    CHECK(xy.substitutions == yx.substitutions);
    CHECK(xy.deletions == yx.insertions);
    CHECK(xy.errors() == oracle::EditDistance(x, y));
    CHECK(edit_align(Seq(x), Seq(z)).errors() <= xy.errors() + edit_align(Seq(y), Seq(z)).errors());
    CHECK(edit_align(Seq(x), Seq(y)) == xy);
  }
}

TEST_CASE("wer") {
  const auto r = wer("a b c d", "a x c", LanguageHint::kAuto);
  CHECK(r.wer == 0.5);
  CHECK(r.substitutions == 1);
  CHECK(r.deletions == 1);
  CHECK(r.ref_length == 4);
  CHECK(wer("hello world", "hello world", LanguageHint::kAuto).wer == 0.0);
  CHECK(wer("", "", LanguageHint::kAuto).wer == 0.0);
  const auto inf = wer("", "x y", LanguageHint::kAuto);
  CHECK(std::isinf(inf.wer));
  CHECK(inf.insertions == 2);
  CHECK(wer("我爱你", "我恨你", LanguageHint::kAuto).wer == doctest::Approx(1.0 / 3));
}

TEST_CASE("corpus_wer pools counts") {
  const auto r = corpus_wer({{"a b c d", "a x c d", LanguageHint::kAuto},
                             {"u v w x y z", "u v w x y z", LanguageHint::kAuto}});
  CHECK(r.errors() == 1);
  CHECK(r.ref_length == 10);
  CHECK(r.wer == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(corpus_wer({{"a b", "a b", LanguageHint::kAuto}}).wer == 0.0);
  const auto one = corpus_wer({{"a b c d", "a x c", LanguageHint::kAuto}});
  CHECK(one.wer == wer("a b c d", "a x c", LanguageHint::kAuto).wer);
  // An empty reference contributes its insertions, not an infinity.
  const auto mixed = corpus_wer({{"", "x", LanguageHint::kAuto}, {"a b", "a b", LanguageHint::kAuto}});
  CHECK(mixed.wer == 0.5);
  CHECK(corpus_wer({}).wer == 0.0);
}
