#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

namespace binet {

// A lattice point of Z^N.  Directions are 1-based throughout (i in 1..N);
// unit_step is the single place converting a direction to a coordinate index.
using Coord = std::vector<int>;

inline Coord unit_step(const Coord& c, int dir, int delta = 1) {
  Coord out = c;
  out[dir - 1] += delta;
  return out;
}

inline int coord_sum(const Coord& c) {
  int s = 0;
  for (int x : c) s += x;
  return s;
}

// Nondecreasing coordinate sum, ties lexicographic: the order in which
// propagation sweeps a block.
inline bool wavefront_less(const Coord& a, const Coord& b) {
  int sa = coord_sum(a), sb = coord_sum(b);
  if (sa != sb) return sa < sb;
  return a < b;
}

struct VertexId {
  Coord at;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct EdgeId {
  Coord base;
  int dir = 1;  // edge from base to base + e_dir
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct FaceId {
  Coord base;
  int di = 1, dj = 2;  // di < dj
  friend auto operator<=>(const FaceId&, const FaceId&) = default;
};

struct CubeId {
  Coord base;
  int d1 = 1, d2 = 2, d3 = 3;  // d1 < d2 < d3
  friend auto operator<=>(const CubeId&, const CubeId&) = default;
};

// Two faces spanning an edge together with the edge's endpoints: both
// vertices are incident to both faces.
struct CrossId {
  VertexId v1, v2;
  FaceId f1, f2;
  friend auto operator<=>(const CrossId&, const CrossId&) = default;
};

std::string cell_label(const VertexId& v);
std::string cell_label(const EdgeId& e);
std::string cell_label(const FaceId& f);
std::string cell_label(const CubeId& c);

// Vertices of a face in cyclic order: base, base+e_i, base+e_i+e_j, base+e_j.
std::array<VertexId, 4> vertices_of_face(const FaceId& f);
std::array<VertexId, 2> vertices_of_edge(const EdgeId& e);
std::array<EdgeId, 4> edges_of_face(const FaceId& f);

// All faces incident to a vertex in Z^N: 4 per direction pair.
std::vector<FaceId> faces_of_vertex(const VertexId& v, int N);
// All faces containing an edge: 2 per complementary direction, 2(N-1) total.
std::vector<FaceId> faces_of_edge(const EdgeId& e, int N);
// All crosses of an edge: unordered pairs of faces containing it.
std::vector<CrossId> crosses_of_edge(const EdgeId& e, int N);

// Vertices of a cube, offsets enumerated in binary counting order over
// (d1, d2, d3); index 0 is the base, index 7 the far corner.
std::array<VertexId, 8> vertices_of_cube(const CubeId& c);
// Six faces: for each direction pair the near face (containing the base) and
// the far face (shifted by the remaining direction).
std::array<FaceId, 6> faces_of_cube(const CubeId& c);

// Identification of ij-faces with vertices: the ij-face at base r corresponds
// to the vertex r of a fresh copy of Z^N.
inline VertexId identify_face(const FaceId& f) { return VertexId{f.base}; }
inline FaceId identify_vertex(const VertexId& v, int i, int j) {
  return FaceId{v.at, i, j};
}

// Membership in the reduced cell set paired with an ij-identification: all
// vertices plus all faces that are not ij-faces.
inline bool in_reduced_set(const FaceId& f, int i, int j) {
  return !(f.di == i && f.dj == j);
}

// ---------------------------------------------------------------------------
// Finite blocks [0, a_1] x ... x [0, a_N].
// ---------------------------------------------------------------------------
struct Block {
  Coord sides;  // a_i >= 1

  int N() const { return int(sides.size()); }
  int total_delta() const { return coord_sum(sides); }
  bool contains(const Coord& c) const;
};

// All cells of a block, in wavefront order of their base coordinates.
std::vector<VertexId> block_vertices(const Block& b);
std::vector<FaceId> block_faces(const Block& b);
std::vector<CubeId> block_cubes(const Block& b);
std::vector<EdgeId> block_edges(const Block& b);

// Vertices of the union of 2D coordinate planes of a block (at most two
// nonzero coordinates): the initial surface of 3D propagation.
std::vector<VertexId> coordinate_plane_vertices(const Block& b);
// Faces lying inside a single 2D coordinate plane (base has zeros outside the
// face's own directions).
std::vector<FaceId> coordinate_plane_faces(const Block& b);

}  // namespace binet
