#include "conicond/errors.hpp"

namespace conicond {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimension: return "DimensionError";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kZeroVector: return "ZeroVector";
    case ErrorKind::kNotBalanced: return "NotBalanced";
    case ErrorKind::kXInComplement: return "XInComplement";
    case ErrorKind::kInconsistentClassification: return "InconsistentClassification";
    case ErrorKind::kNotDualFeasible: return "NotDualFeasible";
    case ErrorKind::kNotPrimalFeasible: return "NotPrimalFeasible";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kNonUnitPoint: return "NonUnitPoint";
    case ErrorKind::kZeroColumn: return "ZeroColumn";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kIo: return "IoError";
  }
  return "Error";
}

}  // namespace conicond
