#pragma once

#include <stdexcept>
#include <string>

namespace lunet {

enum class ErrorKind {
  // file / format errors
  MalformedHeader,
  UnsupportedDtype,
  TruncatedData,
  IoFailure,
  MalformedRaster,
  MalformedCheckpoint,
  VersionMismatch,
  MalformedLog,
  // data contract errors
  NonBinaryMask,
  NonBinaryInput,
  DimMismatch,
  ShapeMismatch,
  EmptyDataset,
  EmptyTrainSplit,
  EmptyAccumulator,
  IndexOutOfRange,
  OddSpatialDim,
  StaleCache,
  InvalidConfig,
  InvalidSpec,
  // numerics
  NumericalFault,
  DivergedLoss,
  // cli
  UsageError,
};

const char* to_string(ErrorKind kind);

// Exit-code category of an error kind: 2 usage, 3 data, 4 numerical.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace lunet
