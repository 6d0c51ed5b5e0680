// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace vega {

// Base error for all model-level failures (bad configs, range violations,
// malformed inputs). CLI maps subclasses to distinct exit codes.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input files / descriptors that fail to parse or violate their schema.
class parse_error : public error {
 public:
  using error::error;
};

// I/O failures (missing file, unwritable path).
class io_error : public error {
 public:
  using error::error;
};

// Output-side I/O failures (cannot create or write a result file); kept
// separate from io_error so the CLI can report a distinct exit code.
class write_error : public io_error {
 public:
  using io_error::io_error;
};

// printf-style formatting into std::string.
inline std::string strf(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  va_list ap2;
  va_copy(ap2, ap);
  int n = std::vsnprintf(nullptr, 0, fmt, ap);
  va_end(ap);
  std::string out(n > 0 ? static_cast<size_t>(n) : 0, '\0');
  if (n > 0) std::vsnprintf(out.data(), out.size() + 1, fmt, ap2);
  va_end(ap2);
  return out;
}

constexpr int kSchemaVersion = 1;

}  // namespace vega
