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

#include "lyricprep/structfmt.hpp"

#include <charconv>
#include <cmath>
#include "json.hpp"

#include "lyricprep/errors.hpp"

namespace lyricprep {

using nlohmann::json;

namespace {

bool IsBlankChar(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsBlankChar(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsBlankChar(s.back())) s.remove_suffix(1);
  return s;
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  Segment Parse() {
    Expect('[');
    const std::size_t label_col = pos_;
    const std::size_t close = line_.find(']', pos_);
    if (close == std::string_view::npos) Fail(pos_, "expected ']' after label");
    const std::string_view label_text = line_.substr(pos_, close - pos_);
    const auto label = label_from_string(label_text);
    if (!label) Fail(label_col, "unknown label \"" + std::string(label_text) + "\"");
    pos_ = close + 1;

    Expect('[');
    const std::size_t start_col = pos_;
    const double start = Time();
    Expect(':');
    const double end = Time();
    Expect(']');
    if (!(start < end)) Fail(start_col, "start >= end");

    Segment seg;
    seg.label = *label;
    seg.start_s = start;
    seg.end_s = end;
    seg.lyric = std::string(Trim(line_.substr(pos_)));
    if (!is_vocal(seg.label) && !seg.lyric.empty()) {
      Fail(pos_, "lyric on non-vocal label " + std::string(label_text));
    }
    return seg;
  }

  [[noreturn]] void Fail(std::size_t col, const std::string& what) const {
    throw ParseError(line_no_, col + 1, what);
  }

 private:
  void Expect(char c) {
    if (pos_ >= line_.size() || line_[pos_] != c) {
      Fail(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  double Time() {
    const std::size_t begin = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < line_.size() && IsDigit(line_[pos_])) ++pos_;
      return pos_ > from;
    };
    if (!digits()) Fail(begin, "malformed time");
    if (pos_ < line_.size() && line_[pos_] == '.') {
      ++pos_;
      if (!digits()) Fail(begin, "malformed time");
    }
    double value = 0.0;
    const char* first = line_.data() + begin;
    const char* last = line_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      Fail(begin, "malformed time");
    }
    return value;
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

SongAnnotation parse_structured_lyrics(std::string_view text) {
  SongAnnotation ann;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t nl = text.find('\n', offset);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(offset, nl - offset);
    offset = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;

    LineParser parser(line, line_no);
    // A bare CR is an old-style line break; taking it as lyric text would
    // silently swallow the next segment.
    if (auto cr = line.find('\r'); cr != std::string_view::npos) parser.Fail(cr, "carriage return inside a line");
    Segment seg = parser.Parse();
    if (!ann.segments.empty() && seg.start_s < ann.segments.back().end_s) {
      parser.Fail(line.find('[', 1) + 1, "segment out of order or overlapping previous");
    }
    ann.segments.push_back(std::move(seg));
  }
  return ann;
}

std::string format_time(double seconds) {
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), std::abs(seconds),
                                 std::chars_format::fixed);
  std::string digits(buf, ec == std::errc() ? ptr : buf);
  std::string int_part = digits;
  std::string frac;
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    int_part = digits.substr(0, dot);
    frac = digits.substr(dot + 1);
  }
  char tenth = frac.empty() ? '0' : frac[0];
  const bool round_up = frac.size() > 1 && frac[1] >= '5';
  if (round_up) {
    if (tenth < '9') {
      ++tenth;
    } else {
      tenth = '0';
      int i = static_cast<int>(int_part.size()) - 1;
      for (; i >= 0; --i) {
        if (int_part[i] == '9') {
          int_part[i] = '0';
        } else {
          ++int_part[i];
          break;
        }
      }
      if (i < 0) int_part.insert(int_part.begin(), '1');
    }
  }
  std::string out = int_part + "." + tenth;
  if (std::signbit(seconds) && out != "0.0") out.insert(out.begin(), '-');
  return out;
}

std::string serialize_structured_lyrics(const SongAnnotation& ann) {
  auto violations = validate_annotation(ann, false);
  for (std::size_t i = 0; i < ann.segments.size(); ++i) {
    if (ann.segments[i].lyric.find_first_of("\r\n") != std::string::npos) {
      violations.push_back("segments[" + std::to_string(i) + "]: lyric contains a line break");
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  std::string out;
  for (const Segment& s : ann.segments) {
    out += '[';
    out += to_string(s.label);
    out += "][";
    out += format_time(s.start_s);
    out += ':';
    out += format_time(s.end_s);
    out += ']';
    out += Trim(s.lyric);
    out += '\n';
  }
  return out;
}

namespace {

const json& Field(const json& obj, const std::string& key, const std::string& path,
                  std::size_t line = 0) {
  if (!obj.is_object()) throw SchemaError(path.empty() ? "$" : path, "expected an object", line);
  auto it = obj.find(key);
  const std::string full = path.empty() ? key : path + "." + key;
  if (it == obj.end()) throw SchemaError(full, "missing field", line);
  return *it;
}

std::string String(const json& v, const std::string& path, std::size_t line = 0) {
  if (!v.is_string()) throw SchemaError(path, "expected a string", line);
  return v.get<std::string>();
}

double Number(const json& v, const std::string& path, std::size_t line = 0) {
  if (!v.is_number()) throw SchemaError(path, "expected a number", line);
  return v.get<double>();
}

std::optional<double> NullableNumber(const json& obj, const std::string& key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return Number(*it, key, line);
}

json NumberOrNull(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json ParseJson(std::string_view text, std::size_t line = 0) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what(), line);
  }
}

}  // namespace

GoldDocument load_gold_document(std::string_view json_text) {
  const json doc = ParseJson(json_text);
  GoldDocument out;
  out.annotation.song_id = String(Field(doc, "song_id", ""), "song_id");
  out.annotation.duration_s = Number(Field(doc, "duration_s", ""), "duration_s");
  if (auto it = doc.find("language"); it != doc.end()) {
    out.language = String(*it, "language");
    if (out.language != "zh" && out.language != "en" && out.language != "auto") {
      throw SchemaError("language", "expected \"zh\", \"en\" or \"auto\"");
    }
  }
  const json& segs = Field(doc, "segments", "");
  if (!segs.is_array()) throw SchemaError("segments", "expected an array");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string at = "segments[" + std::to_string(i) + "]";
    const json& s = segs[i];
    Segment seg;
    const std::string label = String(Field(s, "label", at), at + ".label");
    auto parsed = label_from_string(label);
    if (!parsed) throw SchemaError(at + ".label", "unknown label \"" + label + "\"");
    seg.label = *parsed;
    seg.start_s = Number(Field(s, "start_s", at), at + ".start_s");
    seg.end_s = Number(Field(s, "end_s", at), at + ".end_s");
    if (auto it = s.find("lyric"); it != s.end()) seg.lyric = String(*it, at + ".lyric");
    out.annotation.segments.push_back(std::move(seg));
  }
  require_valid(out.annotation, false);
  return out;
}

SongAnnotation load_gold_annotation(std::string_view json_text) {
  return load_gold_document(json_text).annotation;
}

std::string dump_gold_annotation(const SongAnnotation& ann, std::string_view language) {
  json doc;
  doc["song_id"] = ann.song_id;
  doc["duration_s"] = NumberOrNull(ann.duration_s);
  doc["language"] = std::string(language);
  json segs = json::array();
  for (const Segment& s : ann.segments) {
    segs.push_back({{"label", std::string(to_string(s.label))},
                    {"start_s", s.start_s},
                    {"end_s", s.end_s},
                    {"lyric", s.lyric}});
  }
  doc["segments"] = std::move(segs);
  return doc.dump(2) + "\n";
}

std::string_view to_string(SongStatus status) {
  switch (status) {
    case SongStatus::kOk: return "ok";
    case SongStatus::kRejected: return "rejected";
    case SongStatus::kFailed: return "failed";
  }
  return "?";
}

std::optional<SongStatus> status_from_string(std::string_view text) {
  if (text == "ok") return SongStatus::kOk;
  if (text == "rejected") return SongStatus::kRejected;
  if (text == "failed") return SongStatus::kFailed;
  return std::nullopt;
}

std::string dump_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const ManifestEntry& e : entries) {
    json j;
    j["song_id"] = e.song_id;
    j["audio_path"] = e.audio_path;
    j["stage_outputs"] = e.stage_outputs;
    j["wer_estimate"] = NumberOrNull(e.wer_estimate);
    j["cross_wer"] = NumberOrNull(e.cross_wer);
    j["duration_s"] = NumberOrNull(e.duration_s);
    j["timings_s"] = e.timings_s;
    j["status"] = std::string(to_string(e.status));
    j["reject_reason"] = e.reject_reason ? json(*e.reject_reason) : json(nullptr);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<ManifestEntry> load_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t nl = text.find('\n', offset);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = Trim(text.substr(offset, nl - offset));
    offset = nl + 1;
    ++line_no;
    if (line.empty()) continue;

    const json j = ParseJson(line, line_no);
    ManifestEntry e;
    e.song_id = String(Field(j, "song_id", "", line_no), "song_id", line_no);
    e.audio_path = String(Field(j, "audio_path", "", line_no), "audio_path", line_no);
    const std::string status = String(Field(j, "status", "", line_no), "status", line_no);
    auto parsed = status_from_string(status);
    if (!parsed) throw SchemaError("status", "unknown status \"" + status + "\"", line_no);
    e.status = *parsed;

    if (auto it = j.find("stage_outputs"); it != j.end()) {
      if (!it->is_object()) throw SchemaError("stage_outputs", "expected an object", line_no);
      for (const auto& [k, v] : it->items()) {
        e.stage_outputs[k] = String(v, "stage_outputs." + k, line_no);
      }
    }
    if (auto it = j.find("timings_s"); it != j.end()) {
      if (!it->is_object()) throw SchemaError("timings_s", "expected an object", line_no);
      for (const auto& [k, v] : it->items()) {
        e.timings_s[k] = Number(v, "timings_s." + k, line_no);
      }
    }
    e.wer_estimate = NullableNumber(j, "wer_estimate", line_no);
    e.cross_wer = NullableNumber(j, "cross_wer", line_no);
    e.duration_s = NullableNumber(j, "duration_s", line_no);
    if (auto it = j.find("reject_reason"); it != j.end() && !it->is_null()) {
      e.reject_reason = String(*it, "reject_reason", line_no);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace lyricprep
