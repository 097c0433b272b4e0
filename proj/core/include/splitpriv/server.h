// Copyright 2026 The Splitpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPLITPRIV_SERVER_H_
#define SPLITPRIV_SERVER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/embedding.h"
#include "splitpriv/wire.h"

namespace splitpriv {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

// "host:port"; port 0 asks the server for an ephemeral port.
absl::StatusOr<Endpoint> ParseEndpoint(const std::string& text);

// Hosts the Analyzer side of every split a model file supports: all valid
// splits of a plain model, or the one split of an embedding model (with its
// PCA reconstruction). Requests carrying another model's hash are refused.
class AnalyzerServer {
 public:
  static absl::StatusOr<std::unique_ptr<AnalyzerServer>> Create(
      const ModelFile& model);
  ~AnalyzerServer();

  AnalyzerServer(const AnalyzerServer&) = delete;
  AnalyzerServer& operator=(const AnalyzerServer&) = delete;

  const ModelHash& model_hash() const { return hash_; }

  // Answers one request frame; never fails.
  std::vector<std::uint8_t> HandleFrame(
      std::span<const std::uint8_t> frame) const;

  // Binds and starts accepting; each connection gets its own thread.
  // Stop() closes the listener and every open connection.
  absl::Status Start(const Endpoint& endpoint);
  // Bound port, valid after Start().
  std::uint16_t port() const { return port_; }
  void Stop();

 private:
  AnalyzerServer() = default;
  void AcceptLoop();
  void ServeConnection(int fd);

  ModelHash hash_{};
  std::map<std::uint16_t, Analyzer> analyzers_;

  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::thread accept_thread_;
  std::mutex mu_;
  std::vector<int> conn_fds_;
  std::vector<std::thread> conn_threads_;
  bool stopping_ = false;
};

// Synchronous client: one request, one reply.
class AnalyzerClient {
 public:
  static absl::StatusOr<AnalyzerClient> Connect(const Endpoint& endpoint);
  AnalyzerClient(AnalyzerClient&& other) noexcept;
  AnalyzerClient& operator=(AnalyzerClient&& other) noexcept;
  ~AnalyzerClient();

  absl::StatusOr<Reply> Send(const FeatureMessage& msg);
  // Sends an arbitrary frame body.
  absl::StatusOr<Reply> SendFrame(std::span<const std::uint8_t> frame);

 private:
  explicit AnalyzerClient(int fd) : fd_(fd) {}
  int fd_ = -1;
};

}  // namespace splitpriv

#endif  // SPLITPRIV_SERVER_H_
