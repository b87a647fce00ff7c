#pragma once

#include <stdexcept>
#include <string>

namespace evkg {

// Base for everything thrown by the library. CLI maps these to exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input record. Carries the 1-based line number when known.
struct ParseError : Error {
  long line = 0;
  ParseError(const std::string& msg, long line_no = 0)
      : Error(line_no > 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
        line(line_no) {}
};

// Lookup against the store that found nothing.
struct NotFoundError : Error {
  using Error::Error;
};

// Bad flags / bad config. CLI maps these to exit code 2.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace evkg
