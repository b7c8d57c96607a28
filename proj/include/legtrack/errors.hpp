#pragma once

#include <stdexcept>
#include <string>

namespace legtrack {

enum class ErrorCode {
  DegenerateGeometry,
  InsufficientMarkers,
  FitRejected,
  MissingFrame,
  UnknownPoint,
  InvalidBoneVector,
  DegenerateProjection,
  ParseError,
  NonMonotonicTime,
  InvalidParams,
  OutOfRange,
};

const char* error_code_name(ErrorCode code);

/// Base class for all recoverable toolkit errors. Per-sample failures are
/// caught by the pipeline and turned into row flags; configuration and
/// parse failures abort.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct DegenerateGeometryError : Error {
  explicit DegenerateGeometryError(const std::string& m) : Error(ErrorCode::DegenerateGeometry, m) {}
};
struct InsufficientMarkersError : Error {
  explicit InsufficientMarkersError(const std::string& m) : Error(ErrorCode::InsufficientMarkers, m) {}
};
struct FitRejectedError : Error {
  explicit FitRejectedError(const std::string& m) : Error(ErrorCode::FitRejected, m) {}
};
struct MissingFrameError : Error {
  explicit MissingFrameError(const std::string& m) : Error(ErrorCode::MissingFrame, m) {}
};
struct UnknownPointError : Error {
  explicit UnknownPointError(const std::string& m) : Error(ErrorCode::UnknownPoint, m) {}
};
struct InvalidBoneVectorError : Error {
  explicit InvalidBoneVectorError(const std::string& m) : Error(ErrorCode::InvalidBoneVector, m) {}
};
struct DegenerateProjectionError : Error {
  explicit DegenerateProjectionError(const std::string& m) : Error(ErrorCode::DegenerateProjection, m) {}
};
struct ParseError : Error {
  ParseError(int line, int column, const std::string& reason)
      : Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason),
        line(line),
        column(column) {}
  int line;
  int column;
};
struct NonMonotonicTimeError : Error {
  NonMonotonicTimeError(double previous_s, double current_s)
      : Error(ErrorCode::NonMonotonicTime,
              "time " + std::to_string(current_s) + " s does not increase past " +
                  std::to_string(previous_s) + " s"),
        previous_s(previous_s),
        current_s(current_s) {}
  double previous_s;
  double current_s;
};
struct InvalidParamsError : Error {
  explicit InvalidParamsError(const std::string& m) : Error(ErrorCode::InvalidParams, m) {}
};
struct OutOfRangeError : Error {
  explicit OutOfRangeError(const std::string& m) : Error(ErrorCode::OutOfRange, m) {}
};

}  // namespace legtrack
