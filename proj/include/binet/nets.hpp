#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "binet/lattice.hpp"
#include "binet/projective.hpp"
#include "binet/report.hpp"
#include "binet/rng.hpp"

namespace binet {

using VertexMap = std::map<VertexId, ProjPoint>;
using FaceMap = std::map<FaceId, ProjPoint>;
// Dimension-2 subspaces attached to vertices (the planes spanned by the
// incident face points of a face net).
using PlaneField = std::map<VertexId, ProjSubspace>;

// Map on vertices with values in RP^pdim; conjugate when every elementary
// quad is planar.
struct VertexNet {
  int pdim = 3;
  VertexMap values;

  int N() const { return values.empty() ? 0 : int(values.begin()->first.at.size()); }
};

// Map on 2-faces; conjugate when the face points incident to each vertex are
// coplanar.  The plane field is optional cached/initial data: planes[v], when
// present, must contain every incident face value.
struct FaceNet {
  int pdim = 3;
  FaceMap values;
  PlaneField planes;

  int N() const { return values.empty() ? 0 : int(values.begin()->first.base.size()); }
};

struct ConjugateBinet {
  VertexNet vertex;
  FaceNet face;
};

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

// Planarity of every complete quad (fourth-singular-value ratio) plus
// non-degeneracy (no three quad points collinear).  Incomplete faces are
// skipped with a warning.
Report check_vertex_net(const VertexNet& net, const Tolerances& tol);

// Coplanarity of the incident face points at every vertex seeing at least
// four of them, consistency with the plane field where given, and the
// non-degeneracy that the planes at any three vertices of a quad meet in
// exactly one point.
Report check_face_net(const FaceNet& net, const Tolerances& tol);

Report check_binet(const ConjugateBinet& b, const Tolerances& tol);

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

// Eighth point of a conjugate cube from the seven others, ordered
// x, x1, x2, x3, x12, x13, x23: the meet of the three planes through
// (x_i, x_ij, x_ik).
ProjPoint propagate_vertex_cube(const std::array<ProjPoint, 7>& pts,
                                const Tolerances& tol,
                                RankAudit* audit = nullptr);

// Fills a block from values on its 2D coordinate planes by completing cubes
// in wavefront order.  Works for any N >= 3 (for N > 3 each new vertex is
// completed through the lexicographically first available cube).
VertexNet propagate_vertex_net(const VertexNet& initial, const Block& block,
                               const Tolerances& tol,
                               RankAudit* audit = nullptr);

// One cube of face-net propagation: given the plane field at the seven
// vertices around the cube's far corner, produces the three far face points
// (each the meet of three known planes) and the plane at the far corner
// (their join).
struct FaceCubeCompletion {
  std::map<FaceId, ProjPoint> far_faces;
  ProjSubspace far_plane;
};
FaceCubeCompletion complete_face_cube(const CubeId& cube,
                                      const PlaneField& planes,
                                      const Tolerances& tol,
                                      RankAudit* audit = nullptr);

// Face-net propagation over a block from initial data on the coordinate
// planes: in-plane face values plus the plane field on coordinate-plane
// vertices.
FaceNet propagate_face_net(const FaceNet& initial, const Block& block,
                           const Tolerances& tol, RankAudit* audit = nullptr);

// ---------------------------------------------------------------------------
// Restriction and extension along an identification of ij-faces with the
// vertices of a fresh lattice copy.
// ---------------------------------------------------------------------------

VertexNet restrict_face_net(const FaceNet& net, int i, int j);

// Rebuilds a face net from its ij-restriction: ij-faces take the identified
// values directly; faces sharing one direction with {i,j} are the meets of
// consecutive diagonal lines of the identified net (focal points, possibly at
// infinity); faces disjoint from {i,j} are the meets of the four identified
// quad planes at their corners.  Every face whose inputs are present in the
// identified net is produced.
FaceNet extend_face_net(const VertexNet& identified, int i, int j, int N,
                        const Tolerances& tol, RankAudit* audit = nullptr);

// Plane at each vertex spanned by the >= 3 present incident face values
// (recorded only where the span has dimension exactly 2).
PlaneField derive_planes_from_faces(const FaceNet& net, const Tolerances& tol);

// ---------------------------------------------------------------------------
// Dimension audit: spans of all sub-blocks against the minimum of the
// lattice-distance bound and the ambient dimension.
// ---------------------------------------------------------------------------
Report dimension_audit_vertices(const VertexNet& net, const Block& block,
                                const Tolerances& tol);
Report dimension_audit_planes(const PlaneField& planes, const Block& block,
                              int pdim, const Tolerances& tol);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// Random conjugate data on the 2D coordinate planes of a block: free values
// on the axes, planar completions inside each coordinate plane.
VertexNet generate_conjugate_initial(const Block& block, int pdim, Rng& rng);

// The affine reference net v -> A v + b (conjugate for any A, b).
VertexNet affine_net(const Block& block, const Mat& a, const Vec& b);

}  // namespace binet
