#pragma once

#include <functional>
#include <string>

#include "binet/principal.hpp"

namespace binet {

// ---------------------------------------------------------------------------
// Smooth triply conjugate systems: a numerical oracle for the continuum
// picture that the discrete nets approximate.  A system x : U c R^3 -> R^3
// is triply conjugate when every mixed derivative stays in the span of the
// two first derivatives it mixes,
//
//   d_i d_j x = a_ij d_i x + a_ji d_j x,
//
// with six coefficient functions a_ij tied together by compatibility
// conditions.  The focal points (Laplace transforms) L_ij = x - (1/a_ji) d_i x
// are what the face values of a sampled binet discretize.
// ---------------------------------------------------------------------------

// Central finite differences, second order.  The step is validated to
// [1e-6, 1e-2] wherever it is used: below that range cancellation noise
// dominates, above it the truncation error does.
struct FDConfig {
  double h = 1e-4;
};

// A smooth map with optional analytic derivative closures.  Whenever
// `derivative` or `mixed` is absent the corresponding derivative falls back
// to central differences of the closures that are present (mixed partials
// use the four-point stencil on `value` as a last resort).  All closures
// take u in R^3 and return vectors in R^3; directions are 1-based.
struct SmoothSystem {
  std::function<Vec(const Vec&)> value;
  std::function<Vec(const Vec&, int)> derivative;
  std::function<Vec(const Vec&, int, int)> mixed;
  FDConfig fd;
};

// d_i x and d_i d_j x at u, analytic when available, else FD.  SchemaError
// if the FD step leaves [1e-6, 1e-2]; WrongLayer if `value` is empty or u is
// not three-dimensional.
Vec tangent(const SmoothSystem& s, const Vec& u, int i);
Vec mixed_partial(const SmoothSystem& s, const Vec& u, int i, int j);

// The coefficient table at one point.  a(i-1, j-1) holds a_ij, the factor on
// d_i x inside d_i d_j x; the diagonal is unused and zero.  span_residual is
// the worst out-of-span distance of a mixed derivative relative to the
// largest norm among the three vectors involved in its pair.
struct ConjugateCoefficients {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  double span_residual = 0.0;

  double at(int i, int j) const { return a(i - 1, j - 1); }
};

// Least-squares extraction of all six a_ij at u.  DegenerateAxes when two
// tangents fail to span independent directions; NotConjugate when a mixed
// derivative leaves the span of its two tangents by more than tol.span.
ConjugateCoefficients coefficients_at(const SmoothSystem& s, const Vec& u,
                                      const Tolerances& tol);

// Residuals of the coefficient compatibility conditions at u, one entry per
// direction i (1-based): the worse of |d_k a_ij - R| and |d_j a_ik - R| with
// R = a_ij a_jk + a_kj a_ik - a_ij a_ik and {j, k} the other two directions.
// Coefficient derivatives are central differences with step s.fd.h.
Eigen::Vector3d compatibility_residual(const SmoothSystem& s, const Vec& u,
                                       const Tolerances& tol);

// A focal point L_ij = x - (1/a_ji) d_i x: the i-direction tangent line
// touches the focal surface there.  degenerate_pair marks a_ki within floor
// of a_ji (k the third direction) -- the configuration in which the focal
// drift argument below loses its footing.
struct LaplacePoint {
  Vec L;
  int i = 0;
  int j = 0;
  bool degenerate_pair = false;
};

// VanishingCoefficient when |a_ji| is below a floor of 1e-8 relative to the
// local coefficient scale (the focal point escapes to infinity).
LaplacePoint laplace_transform(const SmoothSystem& s, const Vec& u, int i,
                               int j, const Tolerances& tol);

// Checks that the two cross conditions
//
//   <d_1 x, d_2 x> = 0   and   <d_2 L_13, d_3 x> = 0
//
// hold at u, records the full pairwise tangent orthogonality alongside, and
// asserts their equivalence: the report carries "cross_condition" records
// for the two conditions (cosine residuals against condition_tol), pairwise
// "tangent_cosine" records, and a "verdict_agreement" record that fails when
// the conditions and full orthogonality disagree.  d_2 L_13 is obtained by
// central differences of the focal point along u_2, so the check does not
// reuse the algebra it validates.  When the focal point degenerates
// (vanishing a_31), the second condition is recorded as unmet at full
// residual; the agreement record is still asserted if the first condition
// already fails on its own, and otherwise withheld with a warning: the
// equivalence presumes nonvanishing coefficients.
Report check_focal_orthogonality(const SmoothSystem& s, const Vec& u,
                                 const Tolerances& tol,
                                 double condition_tol = 1e-6);

// Closed form of the focal drift d_2 L_13 implied by the compatibility
// conditions; check_focal_orthogonality measures it independently, tests
// compare the two.
Vec focal_drift_closed_form(const SmoothSystem& s, const Vec& u,
                            const Tolerances& tol);

// One discrete sample of a smooth system: vertices x(origin + eps k) on the
// block, 12-face values at the parameter midpoints of their squares, 13-face
// values at the focal points L_23 and 23-face values at the focal points
// L_13 of the face's parameter center.  Faces whose focal coefficient
// vanishes get the infinite point of the tangent direction and are counted
// in focal_at_infinity.  The defect report records the worst vertex-quad
// planarity, face-star planarity and edge-cross orthogonality residuals
// (thresholds are nominal; the numbers shrink as eps does, no rate is
// attached).  Crosses involving infinite face values are skipped with a
// warning.
struct DiscreteSample {
  ConjugateBinet binet;
  Report defects;
  int focal_at_infinity = 0;
};

DiscreteSample sample_discrete(const SmoothSystem& s, const Block& block,
                               const Vec& origin, double eps,
                               const Tolerances& tol);

// Named reference systems with analytic derivative closures:
//   "spherical"      u = (theta, r, phi), the labeling with distinct focal
//                    coefficients (a_21 = 0, a_31 = cot theta);
//   "spherical-rtf"  u = (r, theta, phi): a_21 = a_31 = 1/r, so every focal
//                    point collapses to the origin and the degenerate flag
//                    fires;
//   "parabolic"      x = (s t cos phi, s t sin phi, (t^2 - s^2)/2);
//   "affine"         a fixed non-orthogonal affine map (conjugate, all
//                    coefficients zero);
//   "shear"          x = (u1 + u2, u2, u3);
//   "cartesian"      the identity grid.
// SchemaError for unknown names.
SmoothSystem builtin_system(const std::string& name);

// A random orthogonal curvilinear system: the inversion of a randomly
// rotated and scaled orthogonal affine grid about a random center.
// Inversions preserve angles, so the image is triply orthogonal (hence
// conjugate) with curved coordinate surfaces and generic focal data.
SmoothSystem random_orthogonal_system(Rng& rng);

// The same system pushed through a linear map m (x -> m x).  Linear maps
// preserve conjugacy and the coefficients a_ij but not angles: with a
// non-conformal m this turns an orthogonal system into a conjugate,
// non-orthogonal one with the same focal combinatorics.
SmoothSystem linear_image(const SmoothSystem& s, const Eigen::Matrix3d& m);

}  // namespace binet
