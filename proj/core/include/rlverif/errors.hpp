#pragma once

#include <stdexcept>
#include <string>

namespace rlv {

// Base for every error raised by the library. Callers that only care about
// "something in the campaign failed" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (mismatched vector lengths etc).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// An action failed membership checks against its action space.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Episode protocol misuse: step after done, step before reset.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CorruptionError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

// Handshake failed: no Hello, or an unsupported protocol version.
class ConnectError : public Error {
 public:
  using Error::Error;
};

// The remote side of a bridge session answered with an Error message.
class RemoteError : public Error {
 public:
  RemoteError(std::string code, const std::string& detail)
      : Error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlv
