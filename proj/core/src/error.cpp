#include "lunet/error.hpp"

namespace lunet {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorKind::TruncatedData: return "TruncatedData";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::MalformedRaster: return "MalformedRaster";
    case ErrorKind::MalformedCheckpoint: return "MalformedCheckpoint";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::MalformedLog: return "MalformedLog";
    case ErrorKind::NonBinaryMask: return "NonBinaryMask";
    case ErrorKind::NonBinaryInput: return "NonBinaryInput";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::EmptyTrainSplit: return "EmptyTrainSplit";
    case ErrorKind::EmptyAccumulator: return "EmptyAccumulator";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::OddSpatialDim: return "OddSpatialDim";
    case ErrorKind::StaleCache: return "StaleCache";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NumericalFault: return "NumericalFault";
    case ErrorKind::DivergedLoss: return "DivergedLoss";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "UnknownError";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UsageError:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidSpec:
      return 2;
    case ErrorKind::NumericalFault:
    case ErrorKind::DivergedLoss:
      return 4;
    default:
      return 3;
  }
}

}  // namespace lunet
