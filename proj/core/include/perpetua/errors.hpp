#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace perpetua {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A law or joint law was constructed with invalid parameters.
class InvalidLaw : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The perpetuity series does not converge for the given joint law.
class NonConvergentError : public Error {
 public:
  using Error::Error;
};

// A configuration document failed schema validation. `path()` names the
// offending location, e.g. "config.Q".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// A draw inside a batch failed; carries the stream id of the failing draw.
class SampleError : public Error {
 public:
  SampleError(std::uint64_t stream_id, const std::string& what)
      : Error("stream " + std::to_string(stream_id) + ": " + what), stream_id_(stream_id) {}
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t stream_id_;
};

}  // namespace perpetua
