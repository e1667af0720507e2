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

// Newline-delimited JSON worker around the built-in mock backend. Used to
// exercise the subprocess transport and as a reference for adapter authors.

#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lyricprep/mock_backend.hpp"

int main(int argc, char** argv) {
  lyricprep::MockOptions options;
  int sleep_ms = 0;
  long exit_after = -1;
  std::string fail_songs;
  CLI::App app{"lyricprep mock backend worker (stdin/stdout JSON lines)"};
  app.add_option("--seed", options.seed, "hash seed");
  app.add_option("--variant", options.variant, "\"\" or \"alt\"");
  app.add_option("--sleep-ms", sleep_ms, "delay before every response");
  app.add_option("--exit-after", exit_after, "exit without answering request N+1");
  app.add_option("--fail-songs", fail_songs, "comma-separated song ids that always fail");
  CLI11_PARSE(app, argc, argv);

  std::stringstream ids(fail_songs);
  for (std::string id; std::getline(ids, id, ',');) {
    if (!id.empty()) options.fail_songs.push_back(id);
  }
  options.sleep_s = sleep_ms / 1000.0;
  lyricprep::MockBackend backend(options);

  long served = 0;
  for (std::string line; std::getline(std::cin, line);) {
    if (line.empty()) continue;
    if (exit_after >= 0 && served >= exit_after) return 0;
    nlohmann::json out;
    try {
      const auto request = lyricprep::BackendRequest::from_json(nlohmann::json::parse(line));
      out = backend.call(request, std::numeric_limits<double>::infinity()).to_json();
    } catch (const std::exception& e) {
      out = {{"song_id", ""}, {"ok", false}, {"error", std::string("bad request: ") + e.what()}};
    }
    std::cout << out.dump() << '\n' << std::flush;
    ++served;
  }
  return 0;
}
