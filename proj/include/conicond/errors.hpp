#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conicond {

enum class ErrorKind {
  kDimension,
  kRankDeficient,
  kNumericalFailure,
  kZeroVector,
  kNotBalanced,
  kXInComplement,
  kInconsistentClassification,
  kNotDualFeasible,
  kNotPrimalFeasible,
  kEmptyInput,
  kNonUnitPoint,
  kZeroColumn,
  kParse,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace conicond
