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
#include <string>
#include <string_view>

#include "lyricprep/backend.hpp"

namespace lyricprep {

// 64-bit FNV-1a; the seed of every mock output.
std::uint64_t fnv1a64(std::string_view data);

// Deterministic stand-in for the four model stages. Every response is a pure
// function of (op, song_id, audio_path, span, text, options).
//
//   separate   every stem (vocals, drums, bass, other) is the input path
//   structure  an 11-part legacy-labelled song (start ... end) with
//              whole-second boundaries drawn from the song_id hash and an
//              optional one-second gap before the solo
//   transcribe one word per 2.5 s of span from a 16-word vocabulary; about
//              one span in nine comes back empty
//   align      the request text's words spread over the full span, its
//              later 60 %, or its earlier 60 %, times at 0.01 s
class MockBackend final : public Backend {
 public:
  explicit MockBackend(MockOptions options = {}) : options_(std::move(options)) {}

  BackendResponse call(const BackendRequest& request, double timeout_s) override;
  std::string describe() const override;

  // The response without sleeping or timeout handling.
  BackendResponse respond(const BackendRequest& request) const;

 private:
  MockOptions options_;
};

}  // namespace lyricprep
