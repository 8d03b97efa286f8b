#include "binet/nets.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <set>

namespace binet {

namespace {

// Ratio sigma_k / sigma_1 of the stacked homogeneous representatives;
// measures how far the points are from spanning only k-1 dimensions.
double singular_ratio(const std::vector<const ProjPoint*>& pts, int k) {
  Mat cols(pts[0]->h().size(), pts.size());
  for (size_t c = 0; c < pts.size(); ++c) cols.col(c) = pts[c]->h();
  Eigen::JacobiSVD<Mat> svd(cols);
  const auto& sv = svd.singularValues();
  if (k > sv.size()) return 0.0;
  return sv(k - 1) / sv(0);
}

double quad_planarity(const std::array<const ProjPoint*, 4>& pts) {
  return singular_ratio({pts[0], pts[1], pts[2], pts[3]}, 4);
}

// Smallest triple-spread: min over 3-subsets of sigma_3/sigma_1. Small values
// mean three of the points are nearly collinear.
double min_triple_spread(const std::array<const ProjPoint*, 4>& pts) {
  double worst = 1.0;
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<const ProjPoint*> triple;
    for (int k = 0; k < 4; ++k)
      if (k != skip) triple.push_back(pts[k]);
    worst = std::min(worst, singular_ratio(triple, 3));
  }
  return worst;
}

Vec rnd_vec(Rng& rng, int size) {
  Vec v(size);
  for (int i = 0; i < size; ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

ProjPoint rnd_point(Rng& rng, int pdim) {
  while (true) {
    Vec v = rnd_vec(rng, pdim + 1);
    if (v.norm() > 0.1) return ProjPoint(v);
  }
}

// Generic point in the plane of three others, weighted like an affine
// completion so that marching stays well-spread.
ProjPoint planar_completion(Rng& rng, const ProjPoint& a, const ProjPoint& b,
                            const ProjPoint& opposite) {
  double alpha = rng.uniform(0.5, 1.5);
  double beta = rng.uniform(0.5, 1.5);
  double gamma = rng.uniform(-1.5, -0.5);
  return ProjPoint(alpha * a.h() + beta * b.h() + gamma * opposite.h());
}

}  // namespace

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

Report check_vertex_net(const VertexNet& net, const Tolerances& tol) {
  Report rep;
  if (net.values.empty()) {
    rep.warn("vertex net is empty");
    return rep;
  }
  int N = net.N();
  int complete = 0, partial = 0;
  for (const auto& [v, base_pt] : net.values) {
    for (int i = 1; i <= N; ++i) {
      for (int j = i + 1; j <= N; ++j) {
        FaceId f{v.at, i, j};
        auto vs = vertices_of_face(f);
        std::array<const ProjPoint*, 4> pts{};
        int found = 0;
        for (int k = 0; k < 4; ++k) {
          auto it = net.values.find(vs[k]);
          if (it != net.values.end()) pts[k] = &it->second, ++found;
        }
        if (found < 4) {
          partial += found > 1 ? 1 : 0;
          continue;
        }
        ++complete;
        rep.add(cell_label(f), "quad_planarity", quad_planarity(pts),
                tol.incidence);
        rep.add_floor(cell_label(f), "triple_spread", min_triple_spread(pts),
                      tol.rank);
      }
    }
  }
  if (partial > 0)
    rep.warn(std::to_string(partial) + " incomplete quads skipped");
  if (complete == 0) rep.warn("no complete quad in domain");
  return rep;
}

Report check_face_net(const FaceNet& net, const Tolerances& tol) {
  Report rep;
  if (net.values.empty()) {
    rep.warn("face net is empty");
    return rep;
  }

  // Face points incident to each vertex.
  std::map<VertexId, std::vector<const ProjPoint*>> star;
  for (const auto& [f, p] : net.values)
    for (const auto& v : vertices_of_face(f)) star[v].push_back(&p);

  for (const auto& [v, pts] : star) {
    if (pts.size() >= 4)
      rep.add(cell_label(v), "vertex_coplanarity", singular_ratio(pts, 4),
              tol.incidence);
    auto pl = net.planes.find(v);
    if (pl != net.planes.end()) {
      if (pl->second.dim() != 2) {
        rep.add(cell_label(v), "plane_field_dim_excess",
                std::abs(pl->second.dim() - 2), 0.0);
        continue;
      }
      double worst = 0.0;
      for (const ProjPoint* p : pts)
        worst = std::max(worst, pl->second.contains_residual(*p));
      rep.add(cell_label(v), "plane_field_membership", worst, tol.incidence);
    }
  }

  // Effective planes for the triple-meet non-degeneracy: the given field
  // where present, otherwise the span of at least three incident points.
  PlaneField planes = net.planes;
  for (const auto& [v, pts] : star) {
    if (planes.count(v) || pts.size() < 3) continue;
    Mat cols(pts[0]->h().size(), pts.size());
    for (size_t c = 0; c < pts.size(); ++c) cols.col(c) = pts[c]->h();
    ProjSubspace span = ProjSubspace::span_of(cols, tol);
    if (span.dim() == 2) planes.emplace(v, span);
  }

  std::set<FaceId> faces;
  for (const auto& [f, p] : net.values) faces.insert(f);
  // Also quads all four of whose corners carry planes but whose own value
  // may be absent still constrain the field; restrict to faces in domain.
  for (const auto& f : faces) {
    auto vs = vertices_of_face(f);
    std::array<const ProjSubspace*, 4> ps{};
    bool all = true;
    for (int k = 0; k < 4; ++k) {
      auto it = planes.find(vs[k]);
      if (it == planes.end()) all = false;
      else ps[k] = &it->second;
    }
    if (!all) continue;
    for (int skip = 0; skip < 4; ++skip) {
      std::vector<ProjSubspace> triple;
      for (int k = 0; k < 4; ++k)
        if (k != skip) triple.push_back(*ps[k]);
      ProjSubspace hit = meet(triple, tol);
      if (hit.dim() != 0)
        rep.add(cell_label(f), "plane_triple_meet_dim",
                std::abs(hit.dim()), 0.0);
    }
  }
  return rep;
}

Report check_binet(const ConjugateBinet& b, const Tolerances& tol) {
  Report rep = check_vertex_net(b.vertex, tol);
  rep.merge(check_face_net(b.face, tol));
  return rep;
}

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

ProjPoint propagate_vertex_cube(const std::array<ProjPoint, 7>& pts,
                                const Tolerances& tol, RankAudit* audit) {
  // Order: x, x1, x2, x3, x12, x13, x23.  The far point closes the three far
  // faces, so it lies in each plane (x_i, x_ij, x_ik).
  auto plane = [&](int a, int b, int c) {
    Mat cols(pts[0].h().size(), 3);
    cols.col(0) = pts[a].h();
    cols.col(1) = pts[b].h();
    cols.col(2) = pts[c].h();
    ProjSubspace s = ProjSubspace::span_of(cols, tol, audit, "cube_face_plane");
    if (s.dim() != 2)
      throw GeometryError(ErrorCode::DegenerateCube,
                          "three far-face corners span dimension " +
                              std::to_string(s.dim()) + ", not a plane");
    return s;
  };
  ProjSubspace hit =
      meet({plane(1, 4, 5), plane(2, 4, 6), plane(3, 5, 6)}, tol, audit);
  if (hit.dim() != 0)
    throw GeometryError(ErrorCode::NonGenericMeet,
                        "far-corner planes meet in dimension " +
                            std::to_string(hit.dim()));
  return hit.as_point();
}

VertexNet propagate_vertex_net(const VertexNet& initial, const Block& block,
                               const Tolerances& tol, RankAudit* audit) {
  VertexNet out = initial;
  int N = block.N();
  for (const auto& v : block_vertices(block)) {
    if (out.values.count(v)) continue;
    bool done = false;
    for (int a = 1; a <= N && !done; ++a) {
      if (v.at[a - 1] < 1) continue;
      for (int b = a + 1; b <= N && !done; ++b) {
        if (v.at[b - 1] < 1) continue;
        for (int c = b + 1; c <= N && !done; ++c) {
          if (v.at[c - 1] < 1) continue;
          Coord base = unit_step(unit_step(unit_step(v.at, a, -1), b, -1), c, -1);
          std::array<Coord, 7> offsets = {
              base,
              unit_step(base, a),
              unit_step(base, b),
              unit_step(base, c),
              unit_step(unit_step(base, a), b),
              unit_step(unit_step(base, a), c),
              unit_step(unit_step(base, b), c)};
          std::array<ProjPoint, 7> pts;
          bool all = true;
          for (int k = 0; k < 7 && all; ++k) {
            auto it = out.values.find(VertexId{offsets[k]});
            if (it == out.values.end()) all = false;
            else pts[k] = it->second;
          }
          if (!all) continue;
          out.values.emplace(v, propagate_vertex_cube(pts, tol, audit));
          done = true;
        }
      }
    }
    if (!done)
      throw GeometryError(ErrorCode::WrongLayer,
                          "no completed cube provides this vertex",
                          cell_label(v));
  }
  return out;
}

FaceCubeCompletion complete_face_cube(const CubeId& cube,
                                      const PlaneField& planes,
                                      const Tolerances& tol, RankAudit* audit) {
  auto plane_at = [&](const Coord& c) -> const ProjSubspace& {
    auto it = planes.find(VertexId{c});
    if (it == planes.end())
      throw GeometryError(ErrorCode::WrongLayer, "plane field missing",
                          cell_label(VertexId{c}));
    return it->second;
  };

  FaceCubeCompletion out;
  std::vector<ProjPoint> new_points;
  int dirs[3] = {cube.d1, cube.d2, cube.d3};
  for (int k = 0; k < 3; ++k) {
    int dc = dirs[k];
    int da = dirs[(k + 1) % 3], db = dirs[(k + 2) % 3];
    FaceId far{unit_step(cube.base, dc), std::min(da, db), std::max(da, db)};
    // The far face point lies in the planes of its three known corners.
    Coord c0 = unit_step(cube.base, dc);
    ProjSubspace hit = meet({plane_at(c0), plane_at(unit_step(c0, da)),
                             plane_at(unit_step(c0, db))},
                            tol, audit);
    if (hit.dim() != 0)
      throw GeometryError(ErrorCode::NonGenericMeet,
                          "corner planes meet in dimension " +
                              std::to_string(hit.dim()),
                          cell_label(far));
    out.far_faces.emplace(far, hit.as_point());
    new_points.push_back(hit.as_point());
  }
  out.far_plane = join(new_points, tol, audit);
  if (out.far_plane.dim() != 2)
    throw GeometryError(ErrorCode::DegenerateCube,
                        "far face points span dimension " +
                            std::to_string(out.far_plane.dim()),
                        cell_label(cube));
  return out;
}

FaceNet propagate_face_net(const FaceNet& initial, const Block& block,
                           const Tolerances& tol, RankAudit* audit) {
  FaceNet out = initial;
  for (const auto& cube : block_cubes(block)) {
    Coord far = cube.base;
    far = unit_step(far, cube.d1);
    far = unit_step(far, cube.d2);
    far = unit_step(far, cube.d3);
    // For N >= 4 several cubes share a far corner but contribute different
    // far faces, so skipping is decided per output cell, not per cube.
    bool wanted = !out.planes.count(VertexId{far});
    const int dirs[3] = {cube.d1, cube.d2, cube.d3};
    for (int k = 0; k < 3 && !wanted; ++k) {
      int a = dirs[(k + 1) % 3], b = dirs[(k + 2) % 3];
      FaceId f{unit_step(cube.base, dirs[k]), std::min(a, b), std::max(a, b)};
      if (!out.values.count(f)) wanted = true;
    }
    if (!wanted) continue;
    FaceCubeCompletion done = complete_face_cube(cube, out.planes, tol, audit);
    for (auto& [f, p] : done.far_faces) out.values.emplace(f, p);
    out.planes.emplace(VertexId{far}, done.far_plane);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Restriction and extension
// ---------------------------------------------------------------------------

VertexNet restrict_face_net(const FaceNet& net, int i, int j) {
  VertexNet out;
  out.pdim = net.pdim;
  for (const auto& [f, p] : net.values)
    if (f.di == i && f.dj == j) out.values.emplace(identify_face(f), p);
  return out;
}

PlaneField derive_planes_from_faces(const FaceNet& net, const Tolerances& tol) {
  std::map<VertexId, std::vector<const ProjPoint*>> star;
  for (const auto& [f, p] : net.values)
    for (const auto& v : vertices_of_face(f)) star[v].push_back(&p);
  PlaneField out;
  for (const auto& [v, pts] : star) {
    if (pts.size() < 3) continue;
    Mat cols(pts[0]->h().size(), pts.size());
    for (size_t c = 0; c < pts.size(); ++c) cols.col(c) = pts[c]->h();
    ProjSubspace span = ProjSubspace::span_of(cols, tol);
    if (span.dim() == 2) out.emplace(v, span);
  }
  return out;
}

FaceNet extend_face_net(const VertexNet& identified, int i, int j, int N,
                        const Tolerances& tol, RankAudit* audit) {
  FaceNet out;
  out.pdim = identified.pdim;
  const auto& h = identified.values;
  auto value = [&](const Coord& c) -> const ProjPoint* {
    auto it = h.find(VertexId{c});
    return it == h.end() ? nullptr : &it->second;
  };

  // Plane field: the span of the identified quad around each original
  // vertex v, with corners at v - a e_i - b e_j.
  int degenerate_quads = 0;
  for (const auto& [r, p] : h) {
    for (int a = 0; a <= 1; ++a) {
      for (int b = 0; b <= 1; ++b) {
        VertexId v{unit_step(unit_step(r.at, i, a), j, b)};
        if (out.planes.count(v)) continue;
        Mat cols(identified.pdim + 1, 4);
        bool all = true;
        int c = 0;
        for (int da = -1; da <= 0 && all; ++da)
          for (int db = -1; db <= 0 && all; ++db) {
            const ProjPoint* q =
                value(unit_step(unit_step(v.at, i, da), j, db));
            if (!q) all = false;
            else cols.col(c++) = q->h();
          }
        if (!all) continue;
        ProjSubspace span =
            ProjSubspace::span_of(cols, tol, audit, "identified_quad_plane");
        if (span.dim() == 2) out.planes.emplace(v, span);
        else ++degenerate_quads;
      }
    }
  }

  // ij-faces carry the identified values unchanged.
  for (const auto& [r, p] : h) out.values.emplace(FaceId{r.at, i, j}, p);

  // Faces sharing exactly one direction with {i, j}: meets of consecutive
  // diagonal lines of the identified net.  For a face with directions
  // {s, l}, s in {i,j}, l outside, let t be the other of {i,j}; then
  //   value(base) = (h(base - e_t) v h(base)) ∧ (h(base - e_t + e_l) v h(base + e_l)).
  auto try_focal = [&](const FaceId& f) {
    if (out.values.count(f)) return;
    int s = (f.di == i || f.di == j) ? f.di : f.dj;
    int l = (s == f.di) ? f.dj : f.di;
    int t = (s == i) ? j : i;
    const ProjPoint* a0 = value(unit_step(f.base, t, -1));
    const ProjPoint* a1 = value(f.base);
    const ProjPoint* b0 = value(unit_step(unit_step(f.base, t, -1), l, 1));
    const ProjPoint* b1 = value(unit_step(f.base, l, 1));
    if (!a0 || !a1 || !b0 || !b1) return;
    ProjSubspace la = join(std::vector<ProjPoint>{*a0, *a1}, tol, audit);
    ProjSubspace lb = join(std::vector<ProjPoint>{*b0, *b1}, tol, audit);
    ProjSubspace hit = meet(la, lb, tol, audit);
    if (hit.dim() != 0)
      throw GeometryError(ErrorCode::NonGenericMeet,
                          "diagonal lines meet in dimension " +
                              std::to_string(hit.dim()),
                          cell_label(f));
    out.values.emplace(f, hit.as_point());
  };
  for (const auto& [r, p] : h) {
    for (int l = 1; l <= N; ++l) {
      if (l == i || l == j) continue;
      for (int s : {i, j}) {
        int t = (s == i) ? j : i;
        FaceId f{Coord{}, std::min(s, l), std::max(s, l)};
        // Bases at which r appears as one of the four inputs.
        for (const Coord& base :
             {r.at, unit_step(r.at, t, 1), unit_step(r.at, l, -1),
              unit_step(unit_step(r.at, t, 1), l, -1)}) {
          f.base = base;
          try_focal(f);
        }
      }
    }
  }

  // Faces with both directions outside {i, j} (N >= 4): the unique common
  // point of the four corner planes.
  if (N >= 4) {
    auto try_outer = [&](const FaceId& f) {
      if (out.values.count(f)) return;
      std::vector<ProjSubspace> ps;
      for (const auto& v : vertices_of_face(f)) {
        auto it = out.planes.find(v);
        if (it == out.planes.end()) return;
        ps.push_back(it->second);
      }
      ProjSubspace hit = meet(ps, tol, audit);
      if (hit.dim() != 0)
        throw GeometryError(ErrorCode::NonGenericMeet,
                            "corner planes meet in dimension " +
                                std::to_string(hit.dim()),
                            cell_label(f));
      out.values.emplace(f, hit.as_point());
    };
    for (const auto& [v, plane] : out.planes) {
      for (int k = 1; k <= N; ++k) {
        if (k == i || k == j) continue;
        for (int l = k + 1; l <= N; ++l) {
          if (l == i || l == j) continue;
          for (int da = -1; da <= 0; ++da)
            for (int db = -1; db <= 0; ++db)
              try_outer(FaceId{
                  unit_step(unit_step(v.at, k, da), l, db), k, l});
        }
      }
    }
  }
  (void)degenerate_quads;
  return out;
}

// ---------------------------------------------------------------------------
// Dimension audit
// ---------------------------------------------------------------------------

namespace {

std::string subblock_label(const Coord& lo, const Coord& hi) {
  std::string s = "block[";
  for (size_t k = 0; k < lo.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(lo[k]) + ".." + std::to_string(hi[k]);
  }
  return s + "]";
}

template <typename CollectColumns>
Report dimension_audit_impl(const Block& block, int pdim, int base_dim,
                            const Tolerances& tol, CollectColumns collect) {
  Report rep;
  int N = block.N();
  int checked = 0, generic = 0, skipped = 0;
  // Odometer over all sub-blocks lo <= hi of the block.
  std::vector<std::pair<int, int>> range(N, {0, 0});
  auto advance = [&]() {
    int k = 0;
    while (k < N) {
      auto& [lo, hi] = range[k];
      if (hi < block.sides[k]) {
        ++hi;
        return true;
      }
      if (lo < block.sides[k]) {
        ++lo;
        hi = lo;
        return true;
      }
      lo = hi = 0;
      ++k;
    }
    return false;
  };
  do {
    Coord lo(N), hi(N);
    int delta = 0;
    for (int k = 0; k < N; ++k) {
      lo[k] = range[k].first;
      hi[k] = range[k].second;
      delta += hi[k] - lo[k];
    }
    std::vector<Vec> cols;
    if (!collect(lo, hi, cols)) {
      ++skipped;
      continue;
    }
    Mat stacked(pdim + 1, cols.size());
    for (size_t c = 0; c < cols.size(); ++c) stacked.col(c) = cols[c];
    int dim = ProjSubspace::span_of(stacked, tol).dim();
    int expected = std::min(base_dim + delta, pdim);
    ++checked;
    if (dim > expected)
      rep.add(subblock_label(lo, hi), "span_dim_excess", dim - expected, 0.0);
    else if (dim == expected)
      ++generic;
    else
      rep.warn(subblock_label(lo, hi) + ": span dimension " +
               std::to_string(dim) + " below generic " +
               std::to_string(expected));
  } while (advance());
  rep.warn("dimension audit: " + std::to_string(checked) + " sub-blocks, " +
           std::to_string(generic) + " generic" +
           (skipped ? ", " + std::to_string(skipped) + " skipped" : ""));
  return rep;
}

}  // namespace

Report dimension_audit_vertices(const VertexNet& net, const Block& block,
                                const Tolerances& tol) {
  return dimension_audit_impl(
      block, net.pdim, 0, tol,
      [&](const Coord& lo, const Coord& hi, std::vector<Vec>& cols) {
        Coord c = lo;
        while (true) {
          auto it = net.values.find(VertexId{c});
          if (it == net.values.end()) return false;
          cols.push_back(it->second.h());
          size_t k = 0;
          while (k < c.size() && c[k] == hi[k]) c[k] = lo[k], ++k;
          if (k == c.size()) break;
          ++c[k];
        }
        return true;
      });
}

Report dimension_audit_planes(const PlaneField& planes, const Block& block,
                              int pdim, const Tolerances& tol) {
  Report rep = dimension_audit_impl(
      block, pdim, 2, tol,
      [&](const Coord& lo, const Coord& hi, std::vector<Vec>& cols) {
        Coord c = lo;
        while (true) {
          auto it = planes.find(VertexId{c});
          if (it == planes.end()) return false;
          for (int b = 0; b < it->second.basis().cols(); ++b)
            cols.push_back(it->second.basis().col(b));
          size_t k = 0;
          while (k < c.size() && c[k] == hi[k]) c[k] = lo[k], ++k;
          if (k == c.size()) break;
          ++c[k];
        }
        return true;
      });
  // Plane spans grow from dimension 2, not 0.
  for (auto& r : rep.records) r.quantity = "plane_" + r.quantity;
  return rep;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

VertexNet generate_conjugate_initial(const Block& block, int pdim, Rng& rng) {
  VertexNet net;
  net.pdim = pdim;
  for (const auto& v : coordinate_plane_vertices(block)) {
    std::vector<int> nz;
    for (size_t k = 0; k < v.at.size(); ++k)
      if (v.at[k] != 0) nz.push_back(int(k) + 1);
    if (nz.size() <= 1) {
      net.values.emplace(v, rnd_point(rng, pdim));
      continue;
    }
    int di = nz[0], dj = nz[1];
    const ProjPoint& a = net.values.at(VertexId{unit_step(v.at, di, -1)});
    const ProjPoint& b = net.values.at(VertexId{unit_step(v.at, dj, -1)});
    const ProjPoint& o =
        net.values.at(VertexId{unit_step(unit_step(v.at, di, -1), dj, -1)});
    net.values.emplace(v, planar_completion(rng, a, b, o));
  }
  return net;
}

VertexNet affine_net(const Block& block, const Mat& a, const Vec& b) {
  VertexNet net;
  net.pdim = int(b.size());
  for (const auto& v : block_vertices(block)) {
    Vec u(v.at.size());
    for (size_t k = 0; k < v.at.size(); ++k) u[k] = double(v.at[k]);
    net.values.emplace(v, ProjPoint::from_affine(a * u + b));
  }
  return net;
}

}  // namespace binet
