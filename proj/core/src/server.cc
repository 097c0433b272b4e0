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

#include "splitpriv/server.h"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {
namespace {

std::vector<std::uint8_t> Error(WireError code) {
  return EncodeReply(ErrorReply{static_cast<std::uint32_t>(code)});
}

absl::StatusOr<addrinfo*> Resolve(const Endpoint& ep, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  const int rc = ::getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(),
                               port.c_str(), &hints, &res);
  if (rc != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot resolve ", ep.host, ": ", ::gai_strerror(rc)));
  }
  return res;
}

}  // namespace

absl::StatusOr<Endpoint> ParseEndpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint '", text, "' is not host:port"));
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  if (ep.host.size() >= 2 && ep.host.front() == '[' && ep.host.back() == ']') {
    ep.host = ep.host.substr(1, ep.host.size() - 2);
  }
  const std::string port = text.substr(colon + 1);
  unsigned value = 0;
  auto [end, ec] =
      std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || end != port.data() + port.size() || port.empty() ||
      value > 65535) {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint '", text, "' has an invalid port"));
  }
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

absl::StatusOr<std::unique_ptr<AnalyzerServer>> AnalyzerServer::Create(
    const ModelFile& model) {
  std::unique_ptr<AnalyzerServer> server(new AnalyzerServer());
  server->hash_ = model.hash;
  const Network& net = model.net;
  std::vector<std::size_t> splits;
  if (model.split_index.has_value()) {
    splits.push_back(*model.split_index);
  } else {
    for (std::size_t i = 1; i < net.num_layers(); ++i) splits.push_back(i);
  }
  for (std::size_t i : splits) {
    SPLITPRIV_ASSIGN_OR_RETURN(auto halves, SplitAt(net, i));
    SPLITPRIV_ASSIGN_OR_RETURN(
        Analyzer a, Analyzer::Create(model.pca, std::move(halves.second)));
    server->analyzers_.emplace(static_cast<std::uint16_t>(i), std::move(a));
  }
  return server;
}

AnalyzerServer::~AnalyzerServer() { Stop(); }

std::vector<std::uint8_t> AnalyzerServer::HandleFrame(
    std::span<const std::uint8_t> frame) const {
  auto msg = DecodeFeatureMessage(frame);
  if (!msg.ok()) return Error(WireError::kDecodeFailure);
  if (msg->model_hash != hash_) return Error(WireError::kHashMismatch);
  auto it = analyzers_.find(msg->split_index);
  if (it == analyzers_.end()) return Error(WireError::kDecodeFailure);
  const Analyzer& analyzer = it->second;
  if (msg->payload.size() != analyzer.input_dim()) {
    return Error(WireError::kDecodeFailure);
  }
  const std::size_t dim = msg->payload.size();
  auto probs = analyzer.Analyze(Tensor(Shape{1, dim}, std::move(msg->payload)));
  if (!probs.ok()) return Error(WireError::kInternal);
  return EncodeReply(ResultReply{std::move(probs->storage())});
}

absl::Status AnalyzerServer::Start(const Endpoint& endpoint) {
  if (listen_fd_ >= 0) return absl::FailedPreconditionError("already started");
  SPLITPRIV_ASSIGN_OR_RETURN(addrinfo * res, Resolve(endpoint, true));
  int fd = -1;
  std::string last_error = "no usable address";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    return absl::UnavailableError(absl::StrCat(
        "cannot bind ", endpoint.host, ":", endpoint.port, ": ", last_error));
  }
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  listen_fd_ = fd;
  accept_thread_ = std::thread([this] { AcceptLoop(); });
  return absl::OkStatus();
}

void AnalyzerServer::AcceptLoop() {
  while (true) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    conn_fds_.push_back(fd);
    conn_threads_.emplace_back([this, fd] { ServeConnection(fd); });
  }
}

void AnalyzerServer::ServeConnection(int fd) {
  while (true) {
    auto frame = ReadFrame(fd);
    if (!frame.ok()) {
      // A frame that is too long or cut short leaves no way to resync.
      if (absl::IsInvalidArgument(frame.status())) {
        (void)WriteFrame(fd, Error(WireError::kDecodeFailure));
      }
      break;
    }
    if (!WriteFrame(fd, HandleFrame(*frame)).ok()) break;
  }
  std::lock_guard<std::mutex> lock(mu_);
  std::erase(conn_fds_, fd);
  ::close(fd);
}

void AnalyzerServer::Stop() {
  std::vector<std::thread> threads;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_ || listen_fd_ < 0) return;
    stopping_ = true;
    ::shutdown(listen_fd_, SHUT_RDWR);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  {
    std::lock_guard<std::mutex> lock(mu_);
    threads = std::move(conn_threads_);
  }
  for (std::thread& t : threads) t.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
}

absl::StatusOr<AnalyzerClient> AnalyzerClient::Connect(
    const Endpoint& endpoint) {
  SPLITPRIV_ASSIGN_OR_RETURN(addrinfo * res, Resolve(endpoint, false));
  int fd = -1;
  std::string last_error = "no usable address";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    last_error = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    return absl::UnavailableError(
        absl::StrCat("cannot connect to ", endpoint.host, ":", endpoint.port,
                     ": ", last_error));
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return AnalyzerClient(fd);
}

AnalyzerClient::AnalyzerClient(AnalyzerClient&& other) noexcept
    : fd_(other.fd_) {
  other.fd_ = -1;
}

AnalyzerClient& AnalyzerClient::operator=(AnalyzerClient&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

AnalyzerClient::~AnalyzerClient() {
  if (fd_ >= 0) ::close(fd_);
}

absl::StatusOr<Reply> AnalyzerClient::Send(const FeatureMessage& msg) {
  return SendFrame(EncodeFeatureMessage(msg));
}

absl::StatusOr<Reply> AnalyzerClient::SendFrame(
    std::span<const std::uint8_t> frame) {
  if (fd_ < 0) return absl::FailedPreconditionError("client is not connected");
  SPLITPRIV_RETURN_IF_ERROR(WriteFrame(fd_, frame));
  auto reply = ReadFrame(fd_);
  if (absl::IsNotFound(reply.status())) {
    return absl::UnavailableError("server closed the connection");
  }
  SPLITPRIV_RETURN_IF_ERROR(reply.status());
  return DecodeReply(*reply);
}

}  // namespace splitpriv
