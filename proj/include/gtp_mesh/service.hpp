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

#ifndef GTP_MESH_SERVICE_HPP_
#define GTP_MESH_SERVICE_HPP_

#include <sys/types.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "gtp_mesh/config.hpp"
#include "gtp_mesh/frame.hpp"

namespace gtp {

// Handles every op other than the built-in health and shutdown. Throwing
// turns into an "error" response bearing the request id.
using OpHandler = std::function<Json(const std::string& op, const Json& body)>;

// Runs the request loop on a pair of fds. Writes the ready sentinel
// (id 0, op "ready") first, then answers frames strictly in arrival order.
// Returns after replying to "shutdown" or when the input reaches EOF.
// Malformed frames get an "error" reply with id 0 and the loop continues.
void Serve(const OpHandler& handler, int in_fd, int out_fd);

// Creates a FIFO at `path` unless one exists. Returns true when created.
// Throws Error(kSpawnFailed) if `path` exists and is not a FIFO.
bool EnsureFifo(const std::string& path);

enum class ServiceState { kStarting, kReady, kStopping, kDead };

const char* ServiceStateName(ServiceState s);

// Client side of one service process (or of an in-process server attached
// through fds). Safe to share between threads: writes are serialized and
// each caller is woken by the response carrying its own id.
class ServiceHandle {
 public:
  ~ServiceHandle();
  ServiceHandle(const ServiceHandle&) = delete;
  ServiceHandle& operator=(const ServiceHandle&) = delete;

  // Starts `<service_exe> serve --config <config_path>` and blocks until the
  // ready sentinel. Throws Error(kSpawnFailed) when the child cannot start or
  // exits early, Error(kReadyTimeout) after ready_timeout_s.
  static std::unique_ptr<ServiceHandle> Spawn(const GtpConfig& config);

  // Wraps already-connected fds (takes ownership) and waits for the ready
  // sentinel.
  static std::unique_ptr<ServiceHandle> Attach(int write_fd, int read_fd,
                                               double ready_timeout_s = 30.0);

  // Throws Error(kTimeout), Error(kBrokenPipe) (handle becomes dead), or
  // Error(kRemote) when the service answered with an error frame.
  Json Request(const std::string& op, const Json& body,
               std::chrono::duration<double> timeout = std::chrono::seconds(30));

  // Graceful shutdown op, then wait, then SIGTERM/SIGKILL. Returns the exit
  // status (exit code, or 128 + signal). A second call returns the same
  // status without doing anything.
  int Shutdown(std::chrono::duration<double> grace = std::chrono::seconds(5));

  ServiceState state() const { return state_.load(); }
  pid_t pid() const { return pid_; }
  double load_time_s() const { return load_time_s_; }

 private:
  ServiceHandle() = default;

  void AwaitReady(double timeout_s);
  void StartReader();
  void ReaderLoop();
  Json Exchange(const std::string& op, const Json& body,
                std::chrono::duration<double> timeout);
  std::optional<int> ReapChild(std::chrono::duration<double> wait);
  void CloseFds();

  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::atomic<ServiceState> state_{ServiceState::kStarting};
  double load_time_s_ = 0.0;
  std::string fifo_created_in_;
  std::string fifo_created_out_;

  std::mutex write_mu_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<uint64_t, std::optional<Frame>> pending_;
  std::atomic<uint64_t> next_id_{1};
  bool reader_done_ = false;
  std::atomic<bool> stop_reader_{false};
  std::thread reader_;
  std::optional<int> exit_status_;
  std::mutex shutdown_mu_;
};

}  // namespace gtp

#endif  // GTP_MESH_SERVICE_HPP_
