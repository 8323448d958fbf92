#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace facadex {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (CSV, JSON, XML, Turtle, results formats...).
// `line`/`column` are 1-based; `offset` is a 0-based byte offset. Whichever
// positions the underlying format can report are filled in.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::optional<std::size_t> line,
             std::optional<std::size_t> column = std::nullopt,
             std::optional<std::size_t> offset = std::nullopt)
      : Error(what), line_(line), column_(column), offset_(offset) {}

  std::optional<std::size_t> line() const { return line_; }
  std::optional<std::size_t> column() const { return column_; }
  std::optional<std::size_t> offset() const { return offset_; }

 private:
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
  std::optional<std::size_t> offset_;
};

// Bad option values, patterns that do not compile, unsupported charsets.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  FetchError(const std::string& location, const std::string& cause,
             std::optional<long> status = std::nullopt)
      : Error("cannot fetch '" + location + "': " + cause),
        location_(location),
        status_(status) {}

  const std::string& location() const { return location_; }
  std::optional<long> status() const { return status_; }

 private:
  std::string location_;
  std::optional<long> status_;
};

class MetadataError : public Error {
 public:
  using Error::Error;
};

class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// Query evaluation failures (unbound SERVICE endpoint, failed remote call...).
class QueryError : public Error {
 public:
  using Error::Error;
};

// Precondition violations on library calls (e.g. membership index 0).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace facadex
