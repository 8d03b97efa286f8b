#pragma once

#include "binet/nets.hpp"

namespace binet {

// Conjugate binet whose two halves are coupled through a fixed quadric:
// every face value lies in the polar hyperplane of every incident vertex
// value (and vice versa, the pairing being symmetric).
struct PolarBinet {
  ConjugateBinet net;
  Quadric quadric;
};

// Max |normalized pairing| over all vertex-face incidences present in the
// net; pass iff every one is <= tol.orth.  With check_planes, additionally
// verifies the subspace form of the same condition: the plane field at each
// vertex, and the span of each complete quad, lie inside the polar
// hyperplane of the cell's own value.
Report check_polarity(const PolarBinet& pb, const Tolerances& tol,
                      bool check_planes = false);

// Completion of one cube.  Both halves close by conjugate-net rules alone:
// the far vertex is the meet of the three far-quad planes, the far face
// values are meets of the plane field, and the far plane is spanned by the
// three new face values.  Polarity of the twelve new incidences is then a
// consequence of polarity of the input; when `report` is given, those
// pairings and the two subspace inclusions at the far cells are recorded.
struct PolarCubeCompletion {
  ProjPoint far_vertex;
  std::map<FaceId, ProjPoint> far_faces;
  ProjSubspace far_plane;
};
PolarCubeCompletion propagate_polar_cube(const CubeId& cube,
                                         const PolarBinet& pb,
                                         const Tolerances& tol,
                                         Report* report = nullptr,
                                         RankAudit* audit = nullptr);

// Fills a block from data on its coordinate planes.  The two halves
// propagate independently (vertex part by cube completion, face part by
// plane meets); no step enforces polarity, which survives propagation on
// its own and can be audited afterwards with check_polarity.
PolarBinet propagate_polar_net(const PolarBinet& initial, const Block& block,
                               const Tolerances& tol,
                               RankAudit* audit = nullptr);

// The canonical polar partner of a vertex net in RP^3: the face value is the
// pole of the quad's plane, and the plane field at each vertex is the polar
// plane of the vertex value.  Exactly polar for any conjugate input, any N.
PolarBinet polar_binet_from_vertex_net(const VertexNet& g, const Quadric& q,
                                       const Tolerances& tol);

}  // namespace binet
