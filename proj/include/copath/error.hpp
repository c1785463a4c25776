#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace copath {

enum class Errc {
  Domain,
  NotPositiveDefinite,
  DegenerateColumn,
  TooFewObservations,
  SingularDesign,
  DegenerateConditional,
  SchemaMismatch,
  DimensionMismatch,
  LengthMismatch,
  DegenerateResiduals,
  MissingColumn,
  NonNumericCell,
  EmptyFile,
  UnsupportedFormat,
  IoError,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace copath
