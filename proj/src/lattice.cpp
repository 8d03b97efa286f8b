#include "binet/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace binet {

namespace {

std::string coord_str(const Coord& c) {
  std::ostringstream os;
  os << "(";
  for (size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
  os << ")";
  return os.str();
}

// Every base coordinate combination of a block, wavefront-ordered.
std::vector<Coord> block_coords(const Coord& upper) {
  std::vector<Coord> out;
  Coord c(upper.size(), 0);
  while (true) {
    out.push_back(c);
    size_t k = 0;
    while (k < c.size() && c[k] == upper[k]) c[k++] = 0;
    if (k == c.size()) break;
    ++c[k];
  }
  std::sort(out.begin(), out.end(), wavefront_less);
  return out;
}

}  // namespace

std::string cell_label(const VertexId& v) { return "v" + coord_str(v.at); }

std::string cell_label(const EdgeId& e) {
  return "e" + coord_str(e.base) + "+" + std::to_string(e.dir);
}

std::string cell_label(const FaceId& f) {
  return "f" + coord_str(f.base) + ";" + std::to_string(f.di) +
         std::to_string(f.dj);
}

std::string cell_label(const CubeId& c) {
  return "c" + coord_str(c.base) + ";" + std::to_string(c.d1) +
         std::to_string(c.d2) + std::to_string(c.d3);
}

std::array<VertexId, 4> vertices_of_face(const FaceId& f) {
  Coord a = f.base;
  Coord b = unit_step(a, f.di);
  Coord d = unit_step(a, f.dj);
  Coord c = unit_step(b, f.dj);
  return {VertexId{a}, VertexId{b}, VertexId{c}, VertexId{d}};
}

std::array<VertexId, 2> vertices_of_edge(const EdgeId& e) {
  return {VertexId{e.base}, VertexId{unit_step(e.base, e.dir)}};
}

std::array<EdgeId, 4> edges_of_face(const FaceId& f) {
  return {EdgeId{f.base, f.di}, EdgeId{f.base, f.dj},
          EdgeId{unit_step(f.base, f.dj), f.di},
          EdgeId{unit_step(f.base, f.di), f.dj}};
}

std::vector<FaceId> faces_of_vertex(const VertexId& v, int N) {
  std::vector<FaceId> out;
  out.reserve(2 * N * (N - 1));
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j)
      for (int a = -1; a <= 0; ++a)
        for (int b = -1; b <= 0; ++b)
          out.push_back(FaceId{unit_step(unit_step(v.at, i, a), j, b), i, j});
  return out;
}

std::vector<FaceId> faces_of_edge(const EdgeId& e, int N) {
  std::vector<FaceId> out;
  out.reserve(2 * (N - 1));
  for (int l = 1; l <= N; ++l) {
    if (l == e.dir) continue;
    int i = std::min(l, e.dir), j = std::max(l, e.dir);
    out.push_back(FaceId{e.base, i, j});
    out.push_back(FaceId{unit_step(e.base, l, -1), i, j});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CrossId> crosses_of_edge(const EdgeId& e, int N) {
  auto faces = faces_of_edge(e, N);
  auto ends = vertices_of_edge(e);
  std::vector<CrossId> out;
  out.reserve(faces.size() * (faces.size() - 1) / 2);
  for (size_t a = 0; a < faces.size(); ++a)
    for (size_t b = a + 1; b < faces.size(); ++b)
      out.push_back(CrossId{ends[0], ends[1], faces[a], faces[b]});
  return out;
}

std::array<VertexId, 8> vertices_of_cube(const CubeId& c) {
  std::array<VertexId, 8> out;
  for (int bits = 0; bits < 8; ++bits) {
    Coord at = c.base;
    if (bits & 1) at = unit_step(at, c.d1);
    if (bits & 2) at = unit_step(at, c.d2);
    if (bits & 4) at = unit_step(at, c.d3);
    out[bits] = VertexId{std::move(at)};
  }
  return out;
}

std::array<FaceId, 6> faces_of_cube(const CubeId& c) {
  auto face = [&](int da, int db, int dc, bool far) {
    int i = std::min(da, db), j = std::max(da, db);
    return FaceId{far ? unit_step(c.base, dc) : c.base, i, j};
  };
  return {face(c.d1, c.d2, c.d3, false), face(c.d1, c.d2, c.d3, true),
          face(c.d1, c.d3, c.d2, false), face(c.d1, c.d3, c.d2, true),
          face(c.d2, c.d3, c.d1, false), face(c.d2, c.d3, c.d1, true)};
}

bool Block::contains(const Coord& c) const {
  if (c.size() != sides.size()) return false;
  for (size_t k = 0; k < c.size(); ++k)
    if (c[k] < 0 || c[k] > sides[k]) return false;
  return true;
}

std::vector<VertexId> block_vertices(const Block& b) {
  std::vector<VertexId> out;
  for (auto& c : block_coords(b.sides)) out.push_back(VertexId{std::move(c)});
  return out;
}

std::vector<FaceId> block_faces(const Block& b) {
  int N = b.N();
  std::vector<FaceId> out;
  for (int i = 1; i <= N; ++i) {
    for (int j = i + 1; j <= N; ++j) {
      if (b.sides[i - 1] < 1 || b.sides[j - 1] < 1) continue;
      Coord upper = b.sides;
      upper[i - 1] -= 1;
      upper[j - 1] -= 1;
      for (auto& base : block_coords(upper)) out.push_back(FaceId{base, i, j});
    }
  }
  std::sort(out.begin(), out.end(), [](const FaceId& x, const FaceId& y) {
    if (x.base != y.base) return wavefront_less(x.base, y.base);
    return std::tie(x.di, x.dj) < std::tie(y.di, y.dj);
  });
  return out;
}

std::vector<CubeId> block_cubes(const Block& b) {
  int N = b.N();
  std::vector<CubeId> out;
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j)
      for (int k = j + 1; k <= N; ++k) {
        if (b.sides[i - 1] < 1 || b.sides[j - 1] < 1 || b.sides[k - 1] < 1)
          continue;
        Coord upper = b.sides;
        upper[i - 1] -= 1;
        upper[j - 1] -= 1;
        upper[k - 1] -= 1;
        for (auto& base : block_coords(upper))
          out.push_back(CubeId{base, i, j, k});
      }
  std::sort(out.begin(), out.end(), [](const CubeId& x, const CubeId& y) {
    if (x.base != y.base) return wavefront_less(x.base, y.base);
    return std::tie(x.d1, x.d2, x.d3) < std::tie(y.d1, y.d2, y.d3);
  });
  return out;
}

std::vector<EdgeId> block_edges(const Block& b) {
  int N = b.N();
  std::vector<EdgeId> out;
  for (int d = 1; d <= N; ++d) {
    if (b.sides[d - 1] < 1) continue;
    Coord upper = b.sides;
    upper[d - 1] -= 1;
    for (auto& base : block_coords(upper)) out.push_back(EdgeId{base, d});
  }
  std::sort(out.begin(), out.end(), [](const EdgeId& x, const EdgeId& y) {
    if (x.base != y.base) return wavefront_less(x.base, y.base);
    return x.dir < y.dir;
  });
  return out;
}

std::vector<VertexId> coordinate_plane_vertices(const Block& b) {
  std::vector<VertexId> out;
  for (auto& v : block_vertices(b)) {
    int nonzero = 0;
    for (int c : v.at) nonzero += (c != 0);
    if (nonzero <= 2) out.push_back(v);
  }
  return out;
}

std::vector<FaceId> coordinate_plane_faces(const Block& b) {
  std::vector<FaceId> out;
  for (auto& f : block_faces(b)) {
    bool in_plane = true;
    for (int k = 1; k <= b.N(); ++k)
      if (k != f.di && k != f.dj && f.base[k - 1] != 0) in_plane = false;
    if (in_plane) out.push_back(f);
  }
  return out;
}

}  // namespace binet
