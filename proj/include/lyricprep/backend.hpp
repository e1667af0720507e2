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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lyricprep/annotation.hpp"
#include "lyricprep/timelineops.hpp"

namespace lyricprep {

// Model stages served by external backends.
inline constexpr const char* kOpSeparate = "separate";
inline constexpr const char* kOpStructure = "structure";
inline constexpr const char* kOpTranscribe = "transcribe";
inline constexpr const char* kOpAlign = "align";

// Wire envelope sent to a backend. `seq` correlates responses with requests
// when a worker is shared between songs.
struct BackendRequest {
  std::string op;
  std::string song_id;
  std::string audio_path;
  std::optional<std::pair<double, double>> span;
  std::optional<std::string> text;
  std::uint64_t seq = 0;

  nlohmann::json to_json() const;
  // Throws SchemaError.
  static BackendRequest from_json(const nlohmann::json& j);
};

// Wire response: {"song_id", "seq", "ok", "error"?} plus the op payload
// fields at top level:
//   separate   {"stems": {name: path}}
//   structure  {"segments": [{label, start_s, end_s}], "duration_s"?}
//   transcribe {"text": str}
//   align      {"words": [{word, start_s, end_s, score}]}
struct BackendResponse {
  std::string song_id;
  // Absent when the worker does not echo sequence numbers.
  std::optional<std::uint64_t> seq;
  bool ok = false;
  std::optional<std::string> error;
  nlohmann::json payload = nlohmann::json::object();

  static BackendResponse failure(const BackendRequest& req, std::string error);

  nlohmann::json to_json() const;
  // Throws SchemaError.
  static BackendResponse from_json(const nlohmann::json& j);
};

// Returns a description of the first protocol violation of `resp` as an
// answer to `req`, or nullopt if it conforms.
std::optional<std::string> check_response(const BackendRequest& req, const BackendResponse& resp);

// Typed payload accessors; all throw SchemaError on malformed payloads.
std::map<std::string, std::string> stems_payload(const BackendResponse& resp);
struct StructurePayload {
  std::vector<RawSegment> segments;
  std::optional<double> duration_s;
};
StructurePayload structure_payload(const BackendResponse& resp);
std::string transcribe_payload(const BackendResponse& resp);
std::vector<WordAlignment> align_payload(const BackendResponse& resp);

class Backend {
 public:
  virtual ~Backend() = default;
  // Implementations may throw; use backend_call for the error contract.
  virtual BackendResponse call(const BackendRequest& request, double timeout_s) = 0;
  virtual std::string describe() const = 0;
};

// Never throws: transport failures, timeouts and protocol violations come
// back as ok=false responses echoing the request's song_id and seq.
BackendResponse backend_call(Backend& backend, const BackendRequest& request, double timeout_s);

struct MockOptions {
  std::uint64_t seed = 0;
  // "" or "alt"; "alt" perturbs every fourth transcribed word.
  std::string variant;
  // Songs for which every request fails with "mock failure".
  std::vector<std::string> fail_songs;
  double sleep_s = 0.0;
};

struct EndpointSpec {
  enum class Kind { kMock, kSubprocess, kHttp };
  Kind kind = Kind::kMock;
  std::vector<std::string> command;  // kSubprocess
  std::string url;                   // kHttp: requests are POSTed to this URL
  MockOptions mock;                  // kMock

  // "mock", "mock:alt", "http://host:port/path", or a whitespace-separated
  // command line.
  static EndpointSpec parse(const std::string& descriptor);
};

// "timeout after <t> s", the error text of every transport timeout.
std::string timeout_message(double timeout_s);

// Throws ConfigError for unusable descriptors.
std::unique_ptr<Backend> make_backend(const EndpointSpec& spec);

}  // namespace lyricprep
