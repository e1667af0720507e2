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

#include "lyricprep/mock_backend.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace lyricprep {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr std::array<const char*, 16> kVocabulary = {
    "love", "night", "light", "heart", "dream", "fire", "rain", "sky",
    "home", "road",  "time",  "song",  "dance", "stay", "gold", "run"};

std::string SpanKey(const std::pair<double, double>& span) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f|%.3f", span.first, span.second);
  return buf;
}

double Centis(double t) { return std::round(t * 100.0) / 100.0; }

json Structure(std::uint64_t h) {
  auto bits = [h](int slot, int range) {
    return static_cast<double>((h >> (slot * 5)) % static_cast<std::uint64_t>(range));
  };
  const double chorus = 14 + bits(3, 8);
  struct Part {
    const char* label;
    double length;
    double gap_before;
  };
  const std::array<Part, 11> parts = {{
      {"start", 1 + bits(0, 3), 0},
      {"intro", 6 + bits(1, 8), 0},
      {"verse", 16 + bits(2, 10), 0},
      {"chorus", chorus, 0},
      {"solo", 8 + bits(5, 10), bits(4, 2)},
      {"verse", 16 + bits(6, 10), 0},
      {"chorus", chorus, 0},
      {"bridge", 10 + bits(7, 8), 0},
      {"chorus", chorus, 0},
      {"outro", 6 + bits(8, 8), 0},
      {"end", 2, 0},
  }};
  json segs = json::array();
  double t = 0.0;
  for (const Part& p : parts) {
    t += p.gap_before;
    segs.push_back({{"label", p.label}, {"start_s", t}, {"end_s", t + p.length}});
    t += p.length;
  }
  return {{"segments", segs}, {"duration_s", t}};
}

std::string Transcript(const std::string& key, double span_s, const std::string& variant) {
  const std::uint64_t h = fnv1a64(key);
  if (h % 9 == 0) return {};
  const int count = std::max(1, static_cast<int>(span_s / 2.5));
  std::string out;
  for (int k = 0; k < count; ++k) {
    std::size_t idx = fnv1a64(key + "|" + std::to_string(k)) % kVocabulary.size();
    if (variant == "alt" && k % 4 == 3) idx = (idx + 1) % kVocabulary.size();
    if (k > 0) out += ' ';
    out += kVocabulary[idx];
  }
  return out;
}

json Words(const std::string& key, std::pair<double, double> span, const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  for (std::string w; in >> w;) tokens.push_back(w);
  json words = json::array();
  if (tokens.empty()) return words;

  const std::uint64_t h = fnv1a64(key);
  const double len = span.second - span.first;
  double lo = span.first;
  double hi = span.second;
  switch (h % 4) {
    case 1: lo = span.first + 0.4 * len; break;
    case 2: hi = span.first + 0.6 * len; break;
    default: break;
  }
  const double slot = (hi - lo) / static_cast<double>(tokens.size());
  double last_end = -1.0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const double start = Centis(lo + slot * static_cast<double>(k));
    const double end = Centis(lo + slot * (static_cast<double>(k) + 0.8));
    if (!(start < end) || start < last_end) continue;
    const double score = 0.5 + static_cast<double>((h >> 8) % 50) / 100.0;
    words.push_back({{"word", tokens[k]}, {"start_s", start}, {"end_s", end}, {"score", score}});
    last_end = end;
  }
  return words;
}

}  // namespace

BackendResponse MockBackend::respond(const BackendRequest& req) const {
  if (std::find(options_.fail_songs.begin(), options_.fail_songs.end(), req.song_id) !=
      options_.fail_songs.end()) {
    return BackendResponse::failure(req, "mock failure");
  }
  const std::string base = std::to_string(options_.seed) + "|" + req.song_id;

  BackendResponse resp;
  resp.song_id = req.song_id;
  resp.seq = req.seq;
  resp.ok = true;
  if (req.op == kOpSeparate) {
    resp.payload["stems"] = {{"vocals", req.audio_path},
                             {"drums", req.audio_path},
                             {"bass", req.audio_path},
                             {"other", req.audio_path}};
  } else if (req.op == kOpStructure) {
    resp.payload = Structure(fnv1a64("structure|" + base));
  } else if (req.op == kOpTranscribe) {
    if (!req.span) return BackendResponse::failure(req, "transcribe requires a span");
    resp.payload["text"] = Transcript("transcribe|" + base + "|" + SpanKey(*req.span),
                                      req.span->second - req.span->first, options_.variant);
  } else if (req.op == kOpAlign) {
    if (!req.span) return BackendResponse::failure(req, "align requires a span");
    resp.payload["words"] =
        Words("align|" + base + "|" + SpanKey(*req.span), *req.span, req.text.value_or(""));
  } else {
    return BackendResponse::failure(req, "unknown op");
  }
  return resp;
}

BackendResponse MockBackend::call(const BackendRequest& request, double timeout_s) {
  if (options_.sleep_s > 0.0) {
    const double wait = std::min(options_.sleep_s, std::max(timeout_s, 0.0));
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    if (options_.sleep_s > timeout_s) {
      return BackendResponse::failure(request, timeout_message(timeout_s));
    }
  }
  return respond(request);
}

std::string MockBackend::describe() const {
  return options_.variant.empty() ? "mock" : "mock:" + options_.variant;
}

}  // namespace lyricprep
