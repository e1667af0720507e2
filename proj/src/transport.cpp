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

// Subprocess and HTTP transports for the backend wire protocol.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>

#include "httplib.h"
#include "lyricprep/backend.hpp"
#include "lyricprep/errors.hpp"

extern char** environ;

namespace lyricprep {

using nlohmann::json;

namespace {

class TransportError : public Error {
 public:
  using Error::Error;
};

using Clock = std::chrono::steady_clock;

class Worker {
 public:
  Worker(const Worker&) = delete;
  Worker& operator=(const Worker&) = delete;

  ~Worker() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    if (pid_ > 0) {
      int status = 0;
      if (::waitpid(pid_, &status, WNOHANG) == 0) {
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
      }
    }
  }

  static std::unique_ptr<Worker> Spawn(const std::vector<std::string>& command) {
    int in[2];
    int out[2];
    if (::pipe2(in, O_CLOEXEC) != 0) throw TransportError("pipe: " + std::string(std::strerror(errno)));
    if (::pipe2(out, O_CLOEXEC) != 0) {
      ::close(in[0]);
      ::close(in[1]);
      throw TransportError("pipe: " + std::string(std::strerror(errno)));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out[1], STDOUT_FILENO);

    std::vector<char*> argv;
    for (const auto& arg : command) argv.push_back(const_cast<char*>(arg.c_str()));
    argv.push_back(nullptr);

    pid_t pid = 0;
    const int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(in[0]);
    ::close(out[1]);
    if (rc != 0) {
      ::close(in[1]);
      ::close(out[0]);
      throw TransportError("cannot start worker " + command.front() + ": " + std::strerror(rc));
    }
    auto w = std::unique_ptr<Worker>(new Worker);
    w->pid_ = pid;
    w->to_child_ = in[1];
    w->from_child_ = out[0];
    return w;
  }

  std::string Exchange(const std::string& line, Clock::time_point deadline) {
    WriteAll(line + "\n");
    return ReadLine(deadline);
  }

 private:
  Worker() = default;

  void WriteAll(const std::string& data) {
    std::size_t done = 0;
    while (done < data.size()) {
      const ssize_t n = ::write(to_child_, data.data() + done, data.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EPIPE) throw TransportError("worker terminated");
        throw TransportError("write: " + std::string(std::strerror(errno)));
      }
      done += static_cast<std::size_t>(n);
    }
  }

  std::string ReadLine(Clock::time_point deadline) {
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
      if (left.count() <= 0) throw TransportError("timeout");
      pollfd pfd{from_child_, POLLIN, 0};
      const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw TransportError("poll: " + std::string(std::strerror(errno)));
      }
      if (rc == 0) throw TransportError("timeout");
      char chunk[4096];
      const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError("read: " + std::string(std::strerror(errno)));
      }
      if (n == 0) throw TransportError("worker terminated");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

Clock::time_point DeadlineAfter(double timeout_s) {
  const double clamped = std::clamp(timeout_s, 0.0, 1e7);
  // Round up so sub-millisecond timeouts still wait one poll tick.
  const auto ms = static_cast<long long>(std::ceil(clamped * 1000.0));
  return Clock::now() + std::chrono::milliseconds(ms);
}

BackendResponse ParseResponse(const BackendRequest& req, const std::string& body) {
  try {
    return BackendResponse::from_json(json::parse(body));
  } catch (const std::exception& e) {
    return BackendResponse::failure(req, std::string("malformed response: ") + e.what());
  }
}

// Workers are pooled: each call borrows an idle worker or spawns one, so
// concurrent songs get their own process. Broken workers are discarded.
class SubprocessBackend final : public Backend {
 public:
  explicit SubprocessBackend(std::vector<std::string> command) : command_(std::move(command)) {
    static std::once_flag ignore_sigpipe;
    std::call_once(ignore_sigpipe, [] { ::signal(SIGPIPE, SIG_IGN); });
  }

  BackendResponse call(const BackendRequest& request, double timeout_s) override {
    std::unique_ptr<Worker> worker;
    try {
      worker = Acquire();
      const std::string line = worker->Exchange(request.to_json().dump(), DeadlineAfter(timeout_s));
      BackendResponse resp;
      try {
        resp = BackendResponse::from_json(json::parse(line));
      } catch (const std::exception& e) {
        return BackendResponse::failure(request, std::string("malformed response: ") + e.what());
      }
      Release(std::move(worker));
      return resp;
    } catch (const TransportError& e) {
      if (std::string(e.what()) == "timeout") {
        return BackendResponse::failure(request, timeout_message(timeout_s));
      }
      return BackendResponse::failure(request, e.what());
    }
  }

  std::string describe() const override {
    std::string out;
    for (const auto& part : command_) out += (out.empty() ? "" : " ") + part;
    return out;
  }

 private:
  std::unique_ptr<Worker> Acquire() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (!idle_.empty()) {
        auto w = std::move(idle_.back());
        idle_.pop_back();
        return w;
      }
    }
    return Worker::Spawn(command_);
  }

  void Release(std::unique_ptr<Worker> w) {
    std::lock_guard<std::mutex> lock(mu_);
    idle_.push_back(std::move(w));
  }

  std::vector<std::string> command_;
  std::mutex mu_;
  std::vector<std::unique_ptr<Worker>> idle_;
};

class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(std::string url) : url_(std::move(url)) {
    const auto scheme_end = url_.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("bad backend URL " + url_);
    const auto path_start = url_.find('/', scheme_end + 3);
    origin_ = url_.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url_.substr(path_start);
  }

  BackendResponse call(const BackendRequest& request, double timeout_s) override {
    httplib::Client client(origin_);
    if (!client.is_valid()) return BackendResponse::failure(request, "unsupported URL " + url_);
    const auto secs = static_cast<time_t>(timeout_s);
    const auto usecs = static_cast<time_t>(std::ceil((timeout_s - static_cast<double>(secs)) * 1e6));
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    auto res = client.Post(path_, request.to_json().dump(), "application/json");
    if (!res) {
      const auto err = res.error();
      if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
        return BackendResponse::failure(request, timeout_message(timeout_s));
      }
      return BackendResponse::failure(request, "http transport: " + httplib::to_string(err));
    }
    if (res->status != 200) {
      return BackendResponse::failure(request, "http status " + std::to_string(res->status));
    }
    return ParseResponse(request, res->body);
  }

  std::string describe() const override { return url_; }

 private:
  std::string url_;
  std::string origin_;
  std::string path_;
};

}  // namespace

std::unique_ptr<Backend> make_subprocess_backend(std::vector<std::string> command) {
  return std::make_unique<SubprocessBackend>(std::move(command));
}

std::unique_ptr<Backend> make_http_backend(std::string url) {
  return std::make_unique<HttpBackend>(std::move(url));
}

}  // namespace lyricprep
