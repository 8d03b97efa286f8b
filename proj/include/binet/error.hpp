#pragma once

#include <stdexcept>
#include <string>

namespace binet {

enum class ErrorCode {
  AmbientMismatch,      // operands live in different projective spaces
  DegenerateQuadric,    // quadric matrix is singular
  CenterFiber,          // point to project coincides with the projection center
  WrongLayer,           // cell lies outside the expected lattice layer
  IncompleteFace,       // face is missing vertices in the domain (warning-level)
  DegenerateCube,       // cube data does not span the expected dimension
  NonGenericMeet,       // intersection has unexpected dimension
  InfinitePoint,        // affine coordinates requested for a point at infinity
  ClosureFailure,       // Moebius lift is inconsistent around a cycle
  SeedOffLine,          // reconstruction seed violates its constraint line
  DegenerateAxes,       // face axes do not determine a unique point
  VanishingCoefficient, // Laplace transform undefined (coefficient below floor)
  NotConjugate,         // mixed partial leaves the coordinate tangent plane
  SchemaError,          // malformed or unsupported input document
};

const char* error_name(ErrorCode code);

// Thrown by constructive operations when geometry degenerates.  Verification
// routines do not throw; they collect residuals into reports instead.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what, std::string cell = {})
      : std::runtime_error(std::string(error_name(code)) + ": " + what +
                           (cell.empty() ? "" : " [" + cell + "]")),
        code_(code),
        cell_(std::move(cell)) {}

  ErrorCode code() const { return code_; }
  const std::string& cell() const { return cell_; }

 private:
  ErrorCode code_;
  std::string cell_;
};

}  // namespace binet
