#pragma once

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace rlv::bridge {

/// Reliable, ordered, bidirectional stream of newline-terminated lines.
class LineTransport {
 public:
  virtual ~LineTransport() = default;
  /// Next line without its terminator; nullopt once the peer has closed.
  /// Throws TransportError on timeout or I/O failure.
  virtual std::optional<std::string> read_line() = 0;
  /// Writes `line` followed by a single '\n'.
  virtual void write_line(std::string_view line) = 0;
};

/// Line transport over a pair of file descriptors (pipes, stdio, sockets).
/// A zero timeout blocks indefinitely.
class FdTransport : public LineTransport {
 public:
  FdTransport(int read_fd, int write_fd, bool owns_fds,
              std::chrono::milliseconds timeout = std::chrono::milliseconds{0});
  ~FdTransport() override;
  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  std::optional<std::string> read_line() override;
  void write_line(std::string_view line) override;

  void set_timeout(std::chrono::milliseconds timeout) noexcept { timeout_ = timeout; }
  /// Half-close the write side so the peer sees end of stream.
  void close_write();

 private:
  int read_fd_;
  int write_fd_;
  bool owns_;
  std::chrono::milliseconds timeout_;
  std::string buffer_;
  bool eof_ = false;
};

/// Two connected endpoints of an in-process byte stream (socketpair).
std::pair<std::unique_ptr<FdTransport>, std::unique_ptr<FdTransport>> local_stream_pair();

std::unique_ptr<FdTransport> tcp_connect(const std::string& host, std::uint16_t port,
                                         std::chrono::milliseconds timeout);

class TcpListener {
 public:
  /// Port 0 picks an ephemeral port; see port().
  explicit TcpListener(std::uint16_t port, const std::string& bind_host = "127.0.0.1");
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<FdTransport> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Runs `command` under /bin/sh with its stdin/stdout connected to the
/// returned transport. The child is reaped when the transport is destroyed.
class ProcessTransport final : public LineTransport {
 public:
  ProcessTransport(const std::string& command, std::chrono::milliseconds timeout);
  ~ProcessTransport() override;

  std::optional<std::string> read_line() override { return io_->read_line(); }
  void write_line(std::string_view line) override { io_->write_line(line); }

 private:
  std::unique_ptr<FdTransport> io_;
  pid_t pid_ = -1;
};

}  // namespace rlv::bridge
