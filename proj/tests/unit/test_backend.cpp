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

#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "lyricprep/backend.hpp"
#include "lyricprep/errors.hpp"
#include "lyricprep/mock_backend.hpp"

using namespace lyricprep;
using nlohmann::json;

namespace {

BackendRequest Req(const char* op, std::string song = "song-a") {
  BackendRequest r;
  r.op = op;
  r.song_id = std::move(song);
  r.audio_path = "/data/a.wav";
  r.seq = 7;
  return r;
}

std::vector<std::string> WorkerCommand(std::vector<std::string> extra = {}) {
  std::vector<std::string> cmd = {LYRICPREP_MOCK_WORKER};
  cmd.insert(cmd.end(), extra.begin(), extra.end());
  return cmd;
}

// One line per exchange: {"request": {...}, "response": {...}}.
std::vector<std::pair<BackendRequest, json>> Transcript() {
  std::ifstream in(std::string(LYRICPREP_DATA_DIR) + "/protocol/transcript.jsonl");
  std::vector<std::pair<BackendRequest, json>> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    out.emplace_back(BackendRequest::from_json(j.at("request")), j.at("response"));
  }
  return out;
}

}  // namespace

TEST_CASE("request envelope round-trips") {
  auto r = Req(kOpTranscribe);
  r.span = std::make_pair(12.5, 30.0);
  r.text = "la la";
  const json j = r.to_json();
  CHECK(j["span"] == json::array({12.5, 30.0}));
  const auto back = BackendRequest::from_json(j);
  CHECK(back.op == r.op);
  CHECK(back.span == r.span);
  CHECK(back.text == r.text);
  CHECK(back.seq == 7);
  CHECK_THROWS_AS(BackendRequest::from_json(json{{"song_id", "x"}}), SchemaError);
  CHECK_THROWS_AS(BackendRequest::from_json(json{{"op", "align"}, {"song_id", "x"}, {"span", {1}}}),
                  SchemaError);
}

TEST_CASE("response envelope and conformance checks") {
  const auto req = Req(kOpTranscribe);
  const auto ok = BackendResponse::from_json(json{{"song_id", "song-a"}, {"seq", 7}, {"ok", true}, {"text", "hi"}});
  CHECK_FALSE(check_response(req, ok));
  CHECK(transcribe_payload(ok) == "hi");
  CHECK(ok.to_json() == json{{"song_id", "song-a"}, {"seq", 7}, {"ok", true}, {"text", "hi"}});

  auto wrong_song = ok;
  wrong_song.song_id = "b";
  CHECK(check_response(req, wrong_song));
  auto wrong_seq = ok;
  wrong_seq.seq = 8;
  CHECK(check_response(req, wrong_seq));
  auto no_seq = ok;
  no_seq.seq.reset();
  CHECK_FALSE(check_response(req, no_seq));
  auto no_payload = ok;
  no_payload.payload = json::object();
  CHECK(check_response(req, no_payload));
  auto silent_failure = ok;
  silent_failure.ok = false;
  silent_failure.payload = json::object();
  CHECK(check_response(req, silent_failure));

  const auto fail = BackendResponse::failure(req, "boom");
  CHECK_FALSE(check_response(req, fail));
  CHECK(fail.to_json() == json{{"song_id", "song-a"}, {"seq", 7}, {"ok", false}, {"error", "boom"}});
  CHECK_THROWS_AS(BackendResponse::from_json(json{{"song_id", "x"}}), SchemaError);
}

TEST_CASE("payload accessors") {
  BackendResponse r;
  r.ok = true;
  r.payload = json::parse(R"({"segments":[{"label":"solo","start_s":1,"end_s":2}],"duration_s":9})");
  const auto s = structure_payload(r);
  CHECK(s.segments.size() == 1);
  CHECK(s.segments[0].label == "solo");
  CHECK(s.duration_s == 9.0);
  r.payload = json::parse(R"({"words":[{"word":"a","start_s":1,"end_s":2}]})");
  const auto w = align_payload(r);
  CHECK(w[0].score == 1.0);
  r.payload = json::parse(R"({"segments":[{"label":"solo","start_s":"1","end_s":2}]})");
  CHECK_THROWS_AS(structure_payload(r), SchemaError);
  r.payload = json::parse(R"({"stems":{"vocals":"v.wav"}})");
  CHECK(stems_payload(r).at("vocals") == "v.wav");
}

TEST_CASE("mock backend is deterministic") {
  MockBackend mock;
  auto req = Req(kOpTranscribe);
  req.span = std::make_pair(10.0, 30.0);
  const auto a = mock.respond(req);
  const auto b = mock.respond(req);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.ok);

  const auto sep = mock.respond(Req(kOpSeparate));
  const auto stems = stems_payload(sep);
  CHECK(stems.size() == 4);
  for (const auto& [name, path] : stems) CHECK(path == "/data/a.wav");

  const auto st = structure_payload(mock.respond(Req(kOpStructure)));
  CHECK(st.segments.front().label == "start");
  CHECK(st.segments.back().label == "end");
  CHECK(st.duration_s == st.segments.back().end_s);
  const auto other = structure_payload(mock.respond(Req(kOpStructure, "song-b")));
  CHECK(other.duration_s != st.duration_s);

  CHECK_FALSE(mock.respond(Req(kOpTranscribe)).ok);
  CHECK_FALSE(mock.respond(Req("dance")).ok);

  auto al = Req(kOpAlign);
  al.span = std::make_pair(10.0, 20.0);
  al.text = "one two three";
  const auto words = align_payload(mock.respond(al));
  REQUIRE(words.size() == 3);
  CHECK(validate_words(words).empty());
  CHECK(words.front().start_s >= 10.0);
  CHECK(words.back().end_s <= 20.0);

  MockBackend failing(MockOptions{0, "", {"song-a"}, 0.0});
  const auto f = backend_call(failing, Req(kOpSeparate), 1.0);
  CHECK_FALSE(f.ok);
  CHECK(f.error == "mock failure");
}

TEST_CASE("mock alt variant perturbs transcripts") {
  MockBackend plain;
  MockBackend alt(MockOptions{0, "alt", {}, 0.0});
  auto req = Req(kOpTranscribe);
  req.span = std::make_pair(0.0, 40.0);
  const auto p = transcribe_payload(plain.respond(req));
  const auto q = transcribe_payload(alt.respond(req));
  CHECK(p != q);
  CHECK_THROWS_AS(make_backend(EndpointSpec::parse("mock:weird")), ConfigError);
}

TEST_CASE("mock timeout") {
  MockBackend sleepy(MockOptions{0, "", {}, 0.2});
  const auto r = backend_call(sleepy, Req(kOpSeparate), 0.001);
  CHECK_FALSE(r.ok);
  CHECK(r.error == "timeout after 0.001 s");
}

TEST_CASE("endpoint descriptors") {
  CHECK(EndpointSpec::parse("mock").kind == EndpointSpec::Kind::kMock);
  CHECK(EndpointSpec::parse("mock:alt").mock.variant == "alt");
  CHECK(EndpointSpec::parse("http://127.0.0.1:8080/v1").url == "http://127.0.0.1:8080/v1");
  const auto sub = EndpointSpec::parse("python3 -m adapter --op structure");
  CHECK(sub.kind == EndpointSpec::Kind::kSubprocess);
  CHECK(sub.command.size() == 5);
  CHECK_THROWS_AS(EndpointSpec::parse("  "), ConfigError);
}

TEST_CASE("recorded transcript replays against the built-in mock") {
  const auto transcript = Transcript();
  REQUIRE(transcript.size() >= 8);
  MockBackend mock;
  for (const auto& [req, expected] : transcript) {
    const auto resp = backend_call(mock, req, 5.0);
    CHECK(resp.to_json() == expected);
  }
}

TEST_CASE("subprocess transport") {
  auto backend = make_backend(EndpointSpec{EndpointSpec::Kind::kSubprocess, WorkerCommand(), "", {}});

  SUBCASE("matches the recorded transcript") {
    for (const auto& [req, expected] : Transcript()) {
      CHECK(backend_call(*backend, req, 5.0).to_json() == expected);
    }
  }
  SUBCASE("concurrent calls get their own responses") {
    std::vector<std::thread> threads;
    std::vector<int> good(8, 0);
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&, t] {
        auto req = Req(kOpStructure, "song-" + std::to_string(t));
        req.seq = 100 + t;
        const auto r = backend_call(*backend, req, 5.0);
        good[t] = r.ok && r.song_id == req.song_id && r.seq == req.seq;
      });
    }
    for (auto& th : threads) th.join();
    CHECK(std::count(good.begin(), good.end(), 1) == 8);
  }
}

TEST_CASE("subprocess worker exits mid-request") {
  auto backend = make_backend(EndpointSpec{EndpointSpec::Kind::kSubprocess, WorkerCommand({"--exit-after", "1"}), "", {}});
  CHECK(backend_call(*backend, Req(kOpSeparate), 5.0).ok);
  const auto r = backend_call(*backend, Req(kOpSeparate), 5.0);
  CHECK_FALSE(r.ok);
  CHECK(r.error == "worker terminated");
  CHECK(r.song_id == "song-a");
  CHECK(r.seq == 7);
}

TEST_CASE("subprocess timeout") {
  auto backend = make_backend(EndpointSpec{EndpointSpec::Kind::kSubprocess, WorkerCommand({"--sleep-ms", "300"}), "", {}});
  const auto r = backend_call(*backend, Req(kOpSeparate), 0.001);
  CHECK_FALSE(r.ok);
  CHECK(r.error == "timeout after 0.001 s");
}

TEST_CASE("subprocess command that cannot start") {
  auto backend = make_backend(EndpointSpec{EndpointSpec::Kind::kSubprocess, {"/nonexistent/worker"}, "", {}});
  const auto r = backend_call(*backend, Req(kOpSeparate), 1.0);
  CHECK_FALSE(r.ok);
  CHECK(r.error->find("cannot start worker") == 0);
}

TEST_CASE("subprocess malformed and mismatched responses") {
  auto garbage = make_backend(EndpointSpec{EndpointSpec::Kind::kSubprocess, {"sh", "-c", "read l; echo '{nope'"}, "", {}});
  const auto r = backend_call(*garbage, Req(kOpSeparate), 5.0);
  CHECK_FALSE(r.ok);
  CHECK(r.error->find("malformed response") == 0);

  auto liar = make_backend(EndpointSpec{EndpointSpec::Kind::kSubprocess,
                                        {"sh", "-c", R"(read l; echo '{"song_id":"other","ok":true,"stems":{}}')"},
                                        "",
                                        {}});
  const auto v = backend_call(*liar, Req(kOpSeparate), 5.0);
  CHECK_FALSE(v.ok);
  CHECK(v.error->find("protocol violation") == 0);
}

TEST_CASE("http transport") {
  httplib::Server server;
  MockBackend mock;
  server.Post("/v1/infer", [&](const httplib::Request& req, httplib::Response& res) {
    const auto request = BackendRequest::from_json(json::parse(req.body));
    if (request.song_id == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(300));
    if (request.song_id == "broken") {
      res.status = 500;
      return;
    }
    res.set_content(mock.respond(request).to_json().dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/v1/infer";
  auto backend = make_backend(EndpointSpec::parse(url));

  for (const auto& [req, expected] : Transcript()) {
    CHECK(backend_call(*backend, req, 5.0).to_json() == expected);
  }
  const auto broken = backend_call(*backend, Req(kOpSeparate, "broken"), 5.0);
  CHECK(broken.error == "http status 500");
  const auto slow = backend_call(*backend, Req(kOpSeparate, "slow"), 0.05);
  CHECK_FALSE(slow.ok);
  CHECK(slow.error == "timeout after 0.05 s");
  auto missing = make_backend(EndpointSpec::parse("http://127.0.0.1:" + std::to_string(port) + "/nope"));
  CHECK(backend_call(*missing, Req(kOpSeparate), 5.0).error == "http status 404");

  server.stop();
  th.join();
}
