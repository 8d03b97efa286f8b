#pragma once

#include "binet/polar.hpp"

namespace binet {

// A principal binet is a conjugate binet in the affine chart of RP^n whose
// halves satisfy one orthogonality constraint per edge: for every edge
// (v, v') the face points of all faces containing the edge are collinear,
// and their common line is orthogonal to the edge.  check_principal verifies
// exactly this; the type is the plain binet, checked rather than enforced.
using PrincipalBinet = ConjugateBinet;

// Per-cross orthogonality: for every cross of every edge, the |cosine|
// between the affine edge direction and the direction spanned by the two
// face points.  Where the plane field is present at both endpoints, also the
// per-edge reduction: every incident face value must lie on the meet line of
// the two planes (which makes the 2(N-1) face points of an edge collinear,
// so the crosses of an edge amount to a single constraint).  Throws
// InfinitePoint when a value needed for a direction is at chart infinity.
Report check_principal(const ConjugateBinet& b, const Tolerances& tol);

// A lift of a principal binet: vertices and faces carry spheres, encoded as
// points of RP^{n+1}, polar with respect to the absolute quadric M of the
// chart.  The lift through a fixed anchor sphere is unique; varying the
// anchor's squared radius sweeps the one-parameter family, every member of
// which projects back to the same binet.
struct MoebiusLift {
  PolarBinet lift;  // quadric == chart.quadric()
  MoebiusChart chart;
  VertexId anchor;
  double family_parameter;   // squared radius assigned at the anchor
  double closure_residual;   // worst re-derivation gap over non-tree incidences
};

// Lifts every value of `b` by breadth-first transport over the vertex-face
// incidence graph: the anchor vertex becomes the sphere (b(anchor), r0_sq),
// each neighbour is the unique point of its fiber polar to the cell it was
// reached from.  Every incidence not used for transport is then re-derived
// and compared; if the worst gap exceeds tol.point the input is not
// principal and ClosureFailure is thrown.  The plane field is transported
// alongside.  Cells not reachable from the anchor through present values are
// an error (WrongLayer).
MoebiusLift moebius_lift(const ConjugateBinet& b, double r0_sq,
                         const VertexId& anchor, const Tolerances& tol);

// Central projection of a polar-to-M binet back to the chart.  Planes whose
// image degenerates (they pass through the projection center) are dropped.
ConjugateBinet project_polar_binet(const PolarBinet& pb,
                                   const MoebiusChart& chart,
                                   const Tolerances& tol);

// Polar propagation of the lifted data over a block; chart and family data
// carry over unchanged.
MoebiusLift extend_lift(const MoebiusLift& ml, const Block& block,
                        const Tolerances& tol, RankAudit* audit = nullptr);

// Principal extension of coordinate-plane data to a full block: lift the
// initial data (anchored at its first vertex with squared radius r0_sq),
// propagate the lift as a polar binet, project back.  The result is
// independent of r0_sq.  Throws InfinitePoint, naming the cell, if any
// propagated value lands at chart infinity.
ConjugateBinet build_principal(const ConjugateBinet& initial,
                               const Block& block, const Tolerances& tol,
                               double r0_sq = 1.0);

// The two extensions of a pair (g, h) of vertex nets related by the ij-face
// identification: (g, extension of h) on the original lattice against
// (h, extension of the shifted g) on the identified one.  Each side runs
// check_principal; the returned report passes iff the two verdicts agree,
// with the per-side outcomes attached as warnings.
Report symmetric_extension_check(const VertexNet& g, const VertexNet& h,
                                 int i, int j, const Tolerances& tol);

// The circle cut out of the absolute quadric by the span of a face's four
// lifted vertices, reported through its axis: the line of centers of all
// spheres containing the circle.  The axis passes through the face's own
// point and is orthogonal to the plane of the base quad.  Requires n == 3.
struct CircleAxis {
  FaceId face;
  ProjSubspace circle_plane;  // span of the four lifted corners, in RP^{n+1}
  Vec through;                // base face point, on the axis
  Vec direction;              // unit normal of the base quad plane
};
CircleAxis face_circle_axis(const MoebiusLift& ml, const FaceId& f,
                            const Tolerances& tol);

// The sphere through the eight lifted vertices of a cube: their span is a
// projective 3-space (DegenerateCube otherwise), and its pole with respect
// to the absolute quadric is the sphere, orthogonal to all eight vertex
// spheres.  The axes of the six face circles of the cube meet at its center.
// Requires n == 3.
struct CubeSphere {
  CubeId cube;
  Vec center;
  double sq_radius = 0.0;
};
CubeSphere cube_sphere(const MoebiusLift& ml, const CubeId& c,
                       const Tolerances& tol);

// Random polar binet with respect to the absolute quadric on a whole block
// (N <= 3).  The vertex half is a random conjugate net in RP^{n+1}; the face
// half is marched in wavefront order, each value drawn from the polar line
// of its quad's span intersected with the spans of all vertex stars already
// holding three values - the same meets propagation would take, with the
// boundary slack filled by random choices on the remaining freedom.  The
// plane field is derived from the finished stars.  Projecting the result
// yields a generic principal binet.
PolarBinet generate_polar_lift(const Block& block, int n, Rng& rng,
                               const Tolerances& tol);

}  // namespace binet
