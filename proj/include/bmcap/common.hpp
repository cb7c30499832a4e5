#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bmcap {

// Execution policy for the data-parallel kernels. Serial is the reference
// path; Parallel uses OpenMP but is arranged so results are bit-identical
// to Serial (per-element loops are parallel, reductions stay ordered).
enum class ExecMode { Serial, Parallel };

inline constexpr std::uint64_t kDefaultStrategyCap = 65536;
inline constexpr std::uint64_t kDefaultWordCap = std::uint64_t{1} << 20;

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitCapExceeded = 3;

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line = -1)
      : std::runtime_error(msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(const std::string& msg, std::uint64_t required,
                   std::uint64_t cap)
      : std::runtime_error(msg), required_(required), cap_(cap) {}
  std::uint64_t required() const { return required_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

}  // namespace bmcap
