#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlat {

// Malformed input data (trace CSVs, topology files). line is 1-based, 0 when
// the failure is not tied to one line.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Localization needs at least three anchors.
class TooFewAnchors : public std::runtime_error {
 public:
  explicit TooFewAnchors(std::size_t have)
      : std::runtime_error("localization needs at least 3 anchors, have " +
                           std::to_string(have)),
        have_(have) {}
  std::size_t have() const { return have_; }

 private:
  std::size_t have_;
};

}  // namespace mlat
