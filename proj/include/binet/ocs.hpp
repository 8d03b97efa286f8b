#pragma once

#include <map>

#include "binet/principal.hpp"

namespace binet {

// ---------------------------------------------------------------------------
// Orthogonal coordinate systems on the lattice: one Euclidean point per
// vertex and one per 3-cube.  The defining property couples the two halves:
// whenever two cubes share a 2-face, the segment between their points is
// orthogonal to every edge of that face.  Each half restricts to a conjugate
// net on its own copy of the lattice, and the whole structure is the shadow
// of a sphere configuration polar to the absolute quadric -- the same
// mechanism that produces principal binets, with cubes taking the role of
// faces.
// ---------------------------------------------------------------------------
struct Ocs {
  std::map<VertexId, Vec> vertex;
  std::map<CubeId, Vec> cube;

  int N() const {
    return vertex.empty() ? 0 : int(vertex.begin()->first.at.size());
  }
};

// Orthogonality audit.  For every 2-face flanked by at least two cubes with
// values, and for every edge of that face with both endpoint values, records
// the |cosine| between the edge and the segment of the two cube points
// against tol.orth.  Degenerate segments or edges are skipped with a
// warning; so is data with no testable configuration at all.
Report check_ocs(const Ocs& x, const Tolerances& tol);

// The orthogonal system of a principal binet on Z^3.  Vertices keep the
// binet's own points.  Every cube with all eight corners and all six face
// values present gets the least-squares meet of its six face axes -- the
// lines through each face value perpendicular to that face's quad plane.
// For a principal binet the six axes concur; the meet must stay within
// tol.incidence of every axis relative to the cube diameter, else
// NonGenericMeet names the cube.  DegenerateAxes when a quad collapses to a
// line or the axes leave a direction undetermined.  Per-cube concurrency
// residuals are recorded in `axes` when given.
Ocs binet_to_ocs(const ConjugateBinet& b, const Tolerances& tol,
                 Report* axes = nullptr);

// Same construction routed through a Moebius lift anchored at squared
// radius r0_sq: cube points are the centers of the lift's cube spheres.
// Moving r0_sq slides every sphere of the lift along its pencil but leaves
// the cube-sphere centers fixed, so the result is independent of r0_sq and
// serves as a cross-check of binet_to_ocs.
Ocs binet_to_ocs_via_lift(const ConjugateBinet& b, double r0_sq,
                          const Tolerances& tol);

// Rebuilds a principal binet from an orthogonal system on the block
// [0,a1]x[0,a2]x[0,a3] (all sides >= 3).  Every 12-face value of the binet
// is confined to the line joining the two flanking cube points; the seeds
// pick positions on those lines along three initial rows -- the faces
// identified with (i,0,1) for 0 <= i < a1, (0,j,1) for 1 <= j < a2 and
// (0,0,k) for 2 <= k < a3.  The seed set must match exactly (WrongLayer)
// and each seed must lie on its line within tol.incidence (SeedOffLine).
// The remaining 12-values follow by intersecting each line with the plane
// of the three quad neighbours already known, interior values by closing
// cubes; the 13- and 23-families come from the diagonal construction on the
// identified net.  The result lives on the core block [1,a-1]^3, where
// every face has both flanking cubes, and reproduces the vertex half
// verbatim.
ConjugateBinet ocs_to_binet(const Ocs& x,
                            const std::map<FaceId, ProjPoint>& seeds,
                            const Block& block, const Tolerances& tol);

// ---------------------------------------------------------------------------
// Sphere lifts of orthogonal systems: one RP^4 point per vertex and per
// cube, polar across every vertex-cube incidence, projecting centrally back
// to the Euclidean data.  The vertex half determines the cube half: each
// cube value is the pole of the span of its eight lifted corners.
// ---------------------------------------------------------------------------
struct OcsLift {
  std::map<VertexId, ProjPoint> vertex;
  std::map<CubeId, ProjPoint> cube;
  MoebiusChart chart;
};

// Cube poles of a principal binet's Moebius lift.  Every cube whose eight
// corners are lifted gets the pole of their span; DegenerateCube when that
// span is not three-dimensional.
OcsLift ocs_lift_of(const MoebiusLift& ml, const Tolerances& tol);

// Central projection of a lift back to Euclidean points.  A value at chart
// infinity raises the projection error with the offending cell named.
Ocs project_ocs_lift(const OcsLift& lift, const Tolerances& tol);

// Polarity audit: the normalized pairing of every vertex-cube incidence
// present in the lift, against tol.orth.
Report check_ocs_lift(const OcsLift& lift, const Tolerances& tol);

// Multi-dimensional consistency drive on the unit hypercube [0,1]^N for
// N >= 4.  Input: orthogonal-system data on the initial 3-volumes -- a
// value for every vertex with at most three nonzero coordinates and for
// every cube based at the origin (WrongLayer when one is missing; extra
// entries are ignored).  The drive determines the sphere lift of the vertex
// part from polarity against the input cube values (one radius is free and
// anchored at the origin), recording the closure residual of every
// vertex-cube incidence; lifts and propagates the vertices as a conjugate
// net in RP^4; re-derives every deep vertex through each of its cubes and
// records the worst gap; derives all cube lifts as poles of their corner
// spans and records, for the initial cubes, the distance between the
// projected pole and the input value; and finally runs the orthogonality
// audit on the completed system (input values on initial cubes, projected
// poles elsewhere).  Residual-type records are held against
// consistency_tol; the final audit against tol.orth.  A completion step
// that degenerates is folded into the report as a failing record rather
// than thrown, so inconsistent input fails gracefully.
Report check_ocs_consistency(const Ocs& initial, int N, const Tolerances& tol,
                             double consistency_tol = 1e-7);

}  // namespace binet
