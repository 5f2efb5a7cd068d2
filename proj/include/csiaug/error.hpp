#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace csiaug {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite entries, out-of-range parameters, malformed configuration.
class InvalidInput : public Error {
public:
  using Error::Error;
};

class ShapeMismatch : public Error {
public:
  using Error::Error;
};

/// Unrecognized container layout (magic, version, enum fields).
class FormatError : public Error {
public:
  FormatError(std::uint64_t offset, const std::string& what)
      : Error("format error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

private:
  std::uint64_t offset_;
};

/// Payload length disagrees with what the header declares.
class CorruptionError : public Error {
public:
  CorruptionError(const std::string& path, std::uint64_t expected, std::uint64_t actual)
      : Error(path + ": corrupt payload, expected " + std::to_string(expected) + " bytes, got " +
              std::to_string(actual)),
        expected_(expected), actual_(actual) {}

  std::uint64_t expected() const noexcept { return expected_; }
  std::uint64_t actual() const noexcept { return actual_; }

private:
  std::uint64_t expected_;
  std::uint64_t actual_;
};

class IoError : public Error {
public:
  IoError(const std::string& path, const std::string& what) : Error(path + ": " + what) {}
};

} // namespace csiaug
