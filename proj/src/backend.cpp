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

#include "lyricprep/backend.hpp"

#include <cstdio>
#include <sstream>

#include "lyricprep/errors.hpp"
#include "lyricprep/mock_backend.hpp"

namespace lyricprep {

using nlohmann::json;

std::unique_ptr<Backend> make_subprocess_backend(std::vector<std::string> command);
std::unique_ptr<Backend> make_http_backend(std::string url);

namespace {

const json& Require(const json& j, const char* key, const std::string& prefix = {}) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(prefix + key, "missing field");
  return *it;
}

std::string RequireString(const json& j, const char* key, const std::string& prefix = {}) {
  const json& v = Require(j, key, prefix);
  if (!v.is_string()) throw SchemaError(prefix + key, "expected a string");
  return v.get<std::string>();
}

double RequireNumber(const json& j, const char* key, const std::string& prefix = {}) {
  const json& v = Require(j, key, prefix);
  if (!v.is_number()) throw SchemaError(prefix + key, "expected a number");
  return v.get<double>();
}

std::uint64_t OptionalSeq(const json& j) {
  auto it = j.find("seq");
  if (it == j.end() || it->is_null()) return 0;
  if (!it->is_number_unsigned() && !it->is_number_integer()) {
    throw SchemaError("seq", "expected a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

bool HasPayloadFor(const std::string& op, const json& payload) {
  if (op == kOpSeparate) return payload.contains("stems");
  if (op == kOpStructure) return payload.contains("segments");
  if (op == kOpTranscribe) return payload.contains("text");
  if (op == kOpAlign) return payload.contains("words");
  return !payload.empty();
}

}  // namespace

json BackendRequest::to_json() const {
  json j;
  j["op"] = op;
  j["song_id"] = song_id;
  j["audio_path"] = audio_path;
  j["seq"] = seq;
  if (span) j["span"] = json::array({span->first, span->second});
  if (text) j["text"] = *text;
  return j;
}

BackendRequest BackendRequest::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  BackendRequest r;
  r.op = RequireString(j, "op");
  r.song_id = RequireString(j, "song_id");
  if (j.contains("audio_path")) r.audio_path = RequireString(j, "audio_path");
  r.seq = OptionalSeq(j);
  if (auto it = j.find("span"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
      throw SchemaError("span", "expected [start_s, end_s]");
    }
    r.span = std::make_pair((*it)[0].get<double>(), (*it)[1].get<double>());
  }
  if (auto it = j.find("text"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError("text", "expected a string");
    r.text = it->get<std::string>();
  }
  return r;
}

BackendResponse BackendResponse::failure(const BackendRequest& req, std::string error) {
  BackendResponse r;
  r.song_id = req.song_id;
  r.seq = req.seq;
  r.ok = false;
  r.error = std::move(error);
  return r;
}

json BackendResponse::to_json() const {
  json j = ok ? payload : json::object();
  j["song_id"] = song_id;
  if (seq) j["seq"] = *seq;
  j["ok"] = ok;
  if (error) j["error"] = *error;
  return j;
}

BackendResponse BackendResponse::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  BackendResponse r;
  r.song_id = RequireString(j, "song_id");
  if (j.contains("seq") && !j["seq"].is_null()) r.seq = OptionalSeq(j);
  const json& ok = Require(j, "ok");
  if (!ok.is_boolean()) throw SchemaError("ok", "expected a boolean");
  r.ok = ok.get<bool>();
  if (auto it = j.find("error"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError("error", "expected a string");
    r.error = it->get<std::string>();
  }
  for (const auto& [k, v] : j.items()) {
    if (k != "song_id" && k != "seq" && k != "ok" && k != "error") r.payload[k] = v;
  }
  return r;
}

std::optional<std::string> check_response(const BackendRequest& req, const BackendResponse& resp) {
  if (resp.song_id != req.song_id) {
    return "response song_id \"" + resp.song_id + "\" does not echo \"" + req.song_id + "\"";
  }
  if (resp.seq && *resp.seq != req.seq) {
    return "response seq " + std::to_string(*resp.seq) + " does not echo " +
           std::to_string(req.seq);
  }
  if (resp.ok && resp.error) return std::string("ok response carries an error");
  if (!resp.ok && !resp.error) return std::string("failed response carries no error");
  if (resp.ok && !HasPayloadFor(req.op, resp.payload)) {
    return "ok response lacks the " + req.op + " payload";
  }
  if (!resp.ok && !resp.payload.empty()) return std::string("failed response carries a payload");
  return std::nullopt;
}

std::map<std::string, std::string> stems_payload(const BackendResponse& resp) {
  const json& stems = Require(resp.payload, "stems");
  if (!stems.is_object()) throw SchemaError("stems", "expected an object");
  std::map<std::string, std::string> out;
  for (const auto& [name, path] : stems.items()) {
    if (!path.is_string()) throw SchemaError("stems." + name, "expected a string");
    out[name] = path.get<std::string>();
  }
  return out;
}

StructurePayload structure_payload(const BackendResponse& resp) {
  const json& segs = Require(resp.payload, "segments");
  if (!segs.is_array()) throw SchemaError("segments", "expected an array");
  StructurePayload out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string at = "segments[" + std::to_string(i) + "].";
    RawSegment s;
    s.label = RequireString(segs[i], "label", at);
    s.start_s = RequireNumber(segs[i], "start_s", at);
    s.end_s = RequireNumber(segs[i], "end_s", at);
    out.segments.push_back(std::move(s));
  }
  if (auto it = resp.payload.find("duration_s"); it != resp.payload.end() && !it->is_null()) {
    if (!it->is_number()) throw SchemaError("duration_s", "expected a number");
    out.duration_s = it->get<double>();
  }
  return out;
}

std::string transcribe_payload(const BackendResponse& resp) {
  return RequireString(resp.payload, "text");
}

std::vector<WordAlignment> align_payload(const BackendResponse& resp) {
  const json& words = Require(resp.payload, "words");
  if (!words.is_array()) throw SchemaError("words", "expected an array");
  std::vector<WordAlignment> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string at = "words[" + std::to_string(i) + "].";
    WordAlignment w;
    w.word = RequireString(words[i], "word", at);
    w.start_s = RequireNumber(words[i], "start_s", at);
    w.end_s = RequireNumber(words[i], "end_s", at);
    if (auto it = words[i].find("score"); it != words[i].end() && !it->is_null()) {
      if (!it->is_number()) throw SchemaError(at + "score", "expected a number");
      w.score = it->get<double>();
    }
    out.push_back(std::move(w));
  }
  return out;
}

BackendResponse backend_call(Backend& backend, const BackendRequest& request, double timeout_s) {
  BackendResponse resp;
  try {
    resp = backend.call(request, timeout_s);
  } catch (const std::exception& e) {
    return BackendResponse::failure(request, e.what());
  }
  if (auto problem = check_response(request, resp)) {
    return BackendResponse::failure(request, "protocol violation: " + *problem);
  }
  return resp;
}

EndpointSpec EndpointSpec::parse(const std::string& descriptor) {
  EndpointSpec spec;
  if (descriptor == "mock") {
    spec.kind = Kind::kMock;
  } else if (descriptor.rfind("mock:", 0) == 0) {
    spec.kind = Kind::kMock;
    spec.mock.variant = descriptor.substr(5);
  } else if (descriptor.rfind("http://", 0) == 0 || descriptor.rfind("https://", 0) == 0) {
    spec.kind = Kind::kHttp;
    spec.url = descriptor;
  } else {
    spec.kind = Kind::kSubprocess;
    std::istringstream in(descriptor);
    for (std::string word; in >> word;) spec.command.push_back(word);
    if (spec.command.empty()) throw ConfigError("empty backend descriptor");
  }
  return spec;
}

std::unique_ptr<Backend> make_backend(const EndpointSpec& spec) {
  switch (spec.kind) {
    case EndpointSpec::Kind::kMock:
      if (!spec.mock.variant.empty() && spec.mock.variant != "alt") {
        throw ConfigError("unknown mock variant \"" + spec.mock.variant + "\"");
      }
      return std::make_unique<MockBackend>(spec.mock);
    case EndpointSpec::Kind::kSubprocess:
      if (spec.command.empty()) throw ConfigError("subprocess backend needs a command");
      return make_subprocess_backend(spec.command);
    case EndpointSpec::Kind::kHttp:
      return make_http_backend(spec.url);
  }
  throw ConfigError("unknown backend kind");
}

std::string timeout_message(double timeout_s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "timeout after %g s", timeout_s);
  return buf;
}

}  // namespace lyricprep
