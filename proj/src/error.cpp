#include "binet/error.hpp"

namespace binet {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::DegenerateQuadric: return "DegenerateQuadric";
    case ErrorCode::CenterFiber: return "CenterFiber";
    case ErrorCode::WrongLayer: return "WrongLayer";
    case ErrorCode::IncompleteFace: return "IncompleteFace";
    case ErrorCode::DegenerateCube: return "DegenerateCube";
    case ErrorCode::NonGenericMeet: return "NonGenericMeet";
    case ErrorCode::InfinitePoint: return "InfinitePoint";
    case ErrorCode::ClosureFailure: return "ClosureFailure";
    case ErrorCode::SeedOffLine: return "SeedOffLine";
    case ErrorCode::DegenerateAxes: return "DegenerateAxes";
    case ErrorCode::VanishingCoefficient: return "VanishingCoefficient";
    case ErrorCode::NotConjugate: return "NotConjugate";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "UnknownError";
}

}  // namespace binet
