// Copyright (c) 2026 The gtp-mesh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gtp_mesh/service.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <climits>
#include <cstring>
#include <vector>

#include "gtp_mesh/error.hpp"

extern char** environ;

namespace gtp {

namespace {

using Clock = std::chrono::steady_clock;

Json ErrorBody(const std::string& code, const std::string& message) {
  return Json{{"code", code}, {"message", message}};
}

// Returns true when `fd` has data (or hangup) within `ms` milliseconds.
bool PollReadable(int fd, int ms) {
  pollfd pfd{fd, POLLIN, 0};
  int rc = ::poll(&pfd, 1, ms);
  return rc > 0 && (pfd.revents & (POLLIN | POLLHUP | POLLERR)) != 0;
}

std::string SelfExe() {
  char buf[PATH_MAX];
  ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n <= 0) return {};
  return std::string(buf, static_cast<size_t>(n));
}

int DecodeWaitStatus(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

void ClearNonBlocking(int fd) {
  int flags = ::fcntl(fd, F_GETFL);
  if (flags >= 0) ::fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
}

}  // namespace

bool EnsureFifo(const std::string& path) {
  if (::mkfifo(path.c_str(), 0600) == 0) return true;
  if (errno != EEXIST) {
    throw Error(ErrorCode::kSpawnFailed, "mkfifo " + path + ": " + std::strerror(errno));
  }
  struct stat st {};
  if (::stat(path.c_str(), &st) != 0 || !S_ISFIFO(st.st_mode)) {
    throw Error(ErrorCode::kSpawnFailed, path + " exists and is not a FIFO");
  }
  return false;
}

const char* ServiceStateName(ServiceState s) {
  switch (s) {
    case ServiceState::kStarting: return "starting";
    case ServiceState::kReady: return "ready";
    case ServiceState::kStopping: return "stopping";
    case ServiceState::kDead: return "dead";
  }
  return "unknown";
}

void Serve(const OpHandler& handler, int in_fd, int out_fd) {
  WriteAll(out_fd, EncodeFrame(Frame{0, "ready", Json::object()}));
  while (true) {
    std::optional<Frame> request;
    try {
      request = ReadFrame(in_fd);
    } catch (const Error& e) {
      // EOF mid-frame leaves nothing to resynchronize on.
      if (e.code() == ErrorCode::kTruncated) return;
      try {
        WriteAll(out_fd, EncodeFrame(Frame{0, "error", ErrorBody(ErrorCodeName(e.code()), e.what())}));
      } catch (const Error&) {
        return;
      }
      continue;
    }
    if (!request) return;

    Frame response{request->id, request->op, Json::object()};
    bool stop = false;
    try {
      if (request->op == "health") {
        response.body = Json{{"status", "ready"}};
      } else if (request->op == "shutdown") {
        response.body = Json{{"status", "stopping"}};
        stop = true;
      } else {
        response.body = handler(request->op, request->body);
      }
    } catch (const Error& e) {
      response.op = "error";
      response.body = ErrorBody(ErrorCodeName(e.code()), e.what());
    } catch (const std::exception& e) {
      response.op = "error";
      response.body = ErrorBody("Internal", e.what());
    }

    std::string bytes;
    try {
      bytes = EncodeFrame(response);
    } catch (const Error& e) {
      bytes = EncodeFrame(Frame{request->id, "error", ErrorBody(ErrorCodeName(e.code()), e.what())});
    }
    try {
      WriteAll(out_fd, bytes);
    } catch (const Error&) {
      return;
    }
    if (stop) return;
  }
}

ServiceHandle::~ServiceHandle() {
  try {
    Shutdown(std::chrono::seconds(2));
  } catch (...) {
  }
}

std::unique_ptr<ServiceHandle> ServiceHandle::Spawn(const GtpConfig& config) {
  if (config.config_path.empty()) {
    throw Error(ErrorCode::kSpawnFailed, "service spawn needs a config file path");
  }
  ::signal(SIGPIPE, SIG_IGN);
  std::unique_ptr<ServiceHandle> handle(new ServiceHandle());
  const std::string exe = config.service_exe.empty() ? SelfExe() : config.service_exe;
  if (exe.empty() || ::access(exe.c_str(), X_OK) != 0) {
    throw Error(ErrorCode::kSpawnFailed, "service executable not found: " + exe);
  }
  std::vector<std::string> args = {exe, "serve", "--config", config.config_path};
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  const auto start = Clock::now();
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  int to_child[2] = {-1, -1};
  int from_child[2] = {-1, -1};

  if (config.transport == Transport::kStdio) {
    if (::pipe2(to_child, O_CLOEXEC) != 0 || ::pipe2(from_child, O_CLOEXEC) != 0) {
      posix_spawn_file_actions_destroy(&actions);
      throw Error(ErrorCode::kSpawnFailed, std::string("pipe: ") + std::strerror(errno));
    }
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
  } else {
    if (EnsureFifo(config.fifo_in)) handle->fifo_created_in_ = config.fifo_in;
    if (EnsureFifo(config.fifo_out)) handle->fifo_created_out_ = config.fifo_out;
  }

  pid_t pid = -1;
  int rc = ::posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (config.transport == Transport::kStdio) {
    ::close(to_child[0]);
    ::close(from_child[1]);
    handle->write_fd_ = to_child[1];
    handle->read_fd_ = from_child[0];
  }
  if (rc != 0) {
    handle->CloseFds();
    throw Error(ErrorCode::kSpawnFailed, std::string("posix_spawn: ") + std::strerror(rc));
  }
  handle->pid_ = pid;

  if (config.transport == Transport::kFifo) {
    handle->read_fd_ = ::open(config.fifo_out.c_str(), O_RDONLY | O_NONBLOCK | O_CLOEXEC);
    if (handle->read_fd_ < 0) {
      throw Error(ErrorCode::kSpawnFailed, "open " + config.fifo_out + ": " + std::strerror(errno));
    }
    // The write side only opens once the service holds the read side.
    while (true) {
      int fd = ::open(config.fifo_in.c_str(), O_WRONLY | O_NONBLOCK | O_CLOEXEC);
      if (fd >= 0) {
        handle->write_fd_ = fd;
        break;
      }
      if (errno != ENXIO) {
        throw Error(ErrorCode::kSpawnFailed, "open " + config.fifo_in + ": " + std::strerror(errno));
      }
      if (auto status = handle->ReapChild(std::chrono::milliseconds(0))) {
        handle->exit_status_ = status;
        handle->state_ = ServiceState::kDead;
        throw Error(ErrorCode::kSpawnFailed,
                    "service exited with status " + std::to_string(*status) + " before opening pipes");
      }
      std::chrono::duration<double> elapsed = Clock::now() - start;
      if (elapsed.count() > config.ready_timeout_s) {
        throw Error(ErrorCode::kReadyTimeout, "service did not open its pipes in time");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ClearNonBlocking(handle->read_fd_);
    ClearNonBlocking(handle->write_fd_);
  }

  const std::chrono::duration<double> spent = Clock::now() - start;
  handle->AwaitReady(config.ready_timeout_s - spent.count());
  handle->load_time_s_ = std::chrono::duration<double>(Clock::now() - start).count();
  handle->StartReader();
  return handle;
}

std::unique_ptr<ServiceHandle> ServiceHandle::Attach(int write_fd, int read_fd,
                                                     double ready_timeout_s) {
  ::signal(SIGPIPE, SIG_IGN);
  std::unique_ptr<ServiceHandle> handle(new ServiceHandle());
  handle->write_fd_ = write_fd;
  handle->read_fd_ = read_fd;
  const auto start = Clock::now();
  handle->AwaitReady(ready_timeout_s);
  handle->load_time_s_ = std::chrono::duration<double>(Clock::now() - start).count();
  handle->StartReader();
  return handle;
}

void ServiceHandle::AwaitReady(double timeout_s) {
  const auto deadline = Clock::now() + std::chrono::duration<double>(std::max(timeout_s, 0.0));
  auto fail = [&](ErrorCode code, const std::string& why) {
    if (pid_ > 0 && !exit_status_) {
      ::kill(pid_, SIGKILL);
      exit_status_ = ReapChild(std::chrono::seconds(5));
    }
    CloseFds();
    state_ = ServiceState::kDead;
    throw Error(code, why);
  };
  while (true) {
    if (PollReadable(read_fd_, 20)) break;
    if (pid_ > 0) {
      if (auto status = ReapChild(std::chrono::milliseconds(0))) {
        exit_status_ = status;
        fail(ErrorCode::kSpawnFailed,
             "service exited with status " + std::to_string(*status) + " before ready");
      }
    }
    if (Clock::now() > deadline) fail(ErrorCode::kReadyTimeout, "service not ready in time");
  }
  std::optional<Frame> frame;
  try {
    frame = ReadFrame(read_fd_);
  } catch (const Error& e) {
    fail(ErrorCode::kSpawnFailed, std::string("bad ready frame: ") + e.what());
  }
  if (!frame) {
    if (pid_ > 0) exit_status_ = ReapChild(std::chrono::seconds(5));
    fail(ErrorCode::kSpawnFailed,
         "service closed its output before ready" +
             (exit_status_ ? " (status " + std::to_string(*exit_status_) + ")" : std::string()));
  }
  if (frame->id != 0 || frame->op != "ready") {
    fail(ErrorCode::kSpawnFailed, "first frame was not the ready sentinel");
  }
  state_ = ServiceState::kReady;
}

void ServiceHandle::StartReader() {
  reader_ = std::thread([this] { ReaderLoop(); });
}

void ServiceHandle::ReaderLoop() {
  while (!stop_reader_.load()) {
    if (!PollReadable(read_fd_, 50)) continue;
    std::optional<Frame> frame;
    try {
      frame = ReadFrame(read_fd_);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMalformedPayload || e.code() == ErrorCode::kOversize) continue;
      break;
    }
    if (!frame) break;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pending_.find(frame->id);
    // Responses nobody waits for (timed out, or id-0 errors) are dropped.
    if (it != pending_.end() && !it->second) {
      it->second = std::move(*frame);
      cv_.notify_all();
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  reader_done_ = true;
  ServiceState expected = ServiceState::kReady;
  state_.compare_exchange_strong(expected, ServiceState::kDead);
  cv_.notify_all();
}

Json ServiceHandle::Request(const std::string& op, const Json& body,
                            std::chrono::duration<double> timeout) {
  if (state_.load() != ServiceState::kReady) {
    throw Error(ErrorCode::kBrokenPipe,
                std::string("service is ") + ServiceStateName(state_.load()));
  }
  return Exchange(op, body, timeout);
}

Json ServiceHandle::Exchange(const std::string& op, const Json& body,
                             std::chrono::duration<double> timeout) {
  const uint64_t id = next_id_.fetch_add(1);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (reader_done_) throw Error(ErrorCode::kBrokenPipe, "service output closed");
    pending_[id];
  }
  const std::string bytes = EncodeFrame(Frame{id, op, body});
  try {
    std::lock_guard<std::mutex> lock(write_mu_);
    if (write_fd_ < 0) throw Error(ErrorCode::kBrokenPipe, "service input closed");
    WriteAll(write_fd_, bytes);
  } catch (const Error&) {
    std::lock_guard<std::mutex> lock(mu_);
    pending_.erase(id);
    ServiceState expected = ServiceState::kReady;
    state_.compare_exchange_strong(expected, ServiceState::kDead);
    throw;
  }

  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait_for(lock, timeout, [&] {
    auto it = pending_.find(id);
    return reader_done_ || (it != pending_.end() && it->second.has_value());
  });
  auto node = pending_.extract(id);
  if (!node.empty() && node.mapped().has_value()) {
    Frame& frame = *node.mapped();
    if (frame.op == "error") {
      std::string code = frame.body.value("code", "Unknown");
      std::string message = frame.body.value("message", "");
      throw Error(ErrorCode::kRemote, code + ": " + message);
    }
    return std::move(frame.body);
  }
  if (reader_done_) throw Error(ErrorCode::kBrokenPipe, "service output closed");
  throw Error(ErrorCode::kTimeout, "no response to '" + op + "' request " + std::to_string(id));
}

std::optional<int> ServiceHandle::ReapChild(std::chrono::duration<double> wait) {
  if (pid_ <= 0) return std::nullopt;
  const auto deadline = Clock::now() + wait;
  while (true) {
    int status = 0;
    pid_t rc = ::waitpid(pid_, &status, WNOHANG);
    if (rc == pid_) return DecodeWaitStatus(status);
    if (rc < 0 && errno != EINTR) return -1;
    if (Clock::now() >= deadline) return std::nullopt;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

void ServiceHandle::CloseFds() {
  std::lock_guard<std::mutex> lock(write_mu_);
  if (write_fd_ >= 0) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  write_fd_ = -1;
  read_fd_ = -1;
  if (!fifo_created_in_.empty()) ::unlink(fifo_created_in_.c_str());
  if (!fifo_created_out_.empty()) ::unlink(fifo_created_out_.c_str());
  fifo_created_in_.clear();
  fifo_created_out_.clear();
}

int ServiceHandle::Shutdown(std::chrono::duration<double> grace) {
  std::lock_guard<std::mutex> guard(shutdown_mu_);
  if (exit_status_ && state_.load() == ServiceState::kDead && read_fd_ < 0) {
    return *exit_status_;
  }
  if (state_.load() == ServiceState::kReady) state_ = ServiceState::kStopping;
  bool graceful = false;
  if (write_fd_ >= 0 && !reader_done_) {
    try {
      Exchange("shutdown", Json::object(), grace);
      graceful = true;
    } catch (const Error&) {
    }
  }

  std::optional<int> status = exit_status_;
  if (pid_ > 0 && !status) {
    status = ReapChild(graceful ? grace : std::chrono::duration<double>(0.2));
    if (!status) {
      ::kill(pid_, SIGTERM);
      status = ReapChild(std::chrono::seconds(1));
    }
    if (!status) {
      ::kill(pid_, SIGKILL);
      status = ReapChild(std::chrono::seconds(10));
    }
  }

  stop_reader_ = true;
  if (reader_.joinable()) reader_.join();
  CloseFds();
  exit_status_ = status.value_or(0);
  {
    std::lock_guard<std::mutex> lock(mu_);
    reader_done_ = true;
    state_ = ServiceState::kDead;
    cv_.notify_all();
  }
  return *exit_status_;
}

}  // namespace gtp
