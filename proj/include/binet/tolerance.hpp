#pragma once

namespace binet {

// Global numerical thresholds. All rank decisions are relative to the largest
// singular value of the matrix at hand; incidence/orthogonality residuals are
// dimensionless (computed on unit-norm homogeneous vectors).
struct Tolerances {
  double rank = 1e-9;       // relative singular value cutoff for rank decisions
  double incidence = 1e-8;  // membership / planarity residuals
  double point = 1e-8;      // chordal distance for point equality
  double orth = 1e-8;       // normalized bilinear pairings, edge/axis cosines
  double span = 1e-6;       // out-of-span residual for smooth conjugacy fits
};

}  // namespace binet
