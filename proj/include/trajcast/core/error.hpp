#pragma once

#include <stdexcept>
#include <string>

namespace trajcast {

// Malformed or inconsistent input data (bad rows, missing artifacts,
// mismatched shapes between artifacts). Maps to CLI exit code 2.
class data_error : public std::runtime_error {
public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Parse failure tied to a specific line of a text input.
class parse_error : public data_error {
public:
  parse_error(size_t line, const std::string& what)
      : data_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

private:
  size_t line_;
};

// Numeric breakdown at run time (non-finite loss, divergence).
// Maps to CLI exit code 3.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

enum class checkpoint_error_kind {
  bad_header,
  version_mismatch,
  truncated,
  shape_mismatch,
};

class checkpoint_error : public data_error {
public:
  checkpoint_error(checkpoint_error_kind kind, const std::string& what)
      : data_error(what), kind_(kind) {}
  checkpoint_error_kind kind() const { return kind_; }

private:
  checkpoint_error_kind kind_;
};

}  // namespace trajcast
