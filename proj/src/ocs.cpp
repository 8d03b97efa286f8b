#include "binet/ocs.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "binet/error.hpp"

namespace binet {
namespace {

Vec finite_affine(const ProjPoint& p, const std::string& cell) {
  if (p.is_infinite(1e-12))
    throw GeometryError(ErrorCode::InfinitePoint, "value at chart infinity",
                        cell);
  return p.affine();
}

const Vec& sized_value(const std::map<VertexId, Vec>& values, const VertexId& v) {
  auto it = values.find(v);
  if (it == values.end())
    throw GeometryError(ErrorCode::WrongLayer, "vertex value missing",
                        cell_label(v));
  if (it->second.size() != 3)
    throw GeometryError(ErrorCode::AmbientMismatch, "values must lie in R^3",
                        cell_label(v));
  return it->second;
}

const Vec& sized_value(const std::map<CubeId, Vec>& values, const CubeId& c) {
  auto it = values.find(c);
  if (it == values.end())
    throw GeometryError(ErrorCode::WrongLayer, "cube value missing",
                        cell_label(c));
  if (it->second.size() != 3)
    throw GeometryError(ErrorCode::AmbientMismatch, "values must lie in R^3",
                        cell_label(c));
  return it->second;
}

}  // namespace

Report check_ocs(const Ocs& x, const Tolerances& tol) {
  Report rep;
  // Group the cubes around their faces; every face flanked by two or more
  // cubes yields one configuration per cube pair.  This covers both cubes of
  // the same direction triple (offset along the remaining direction) and,
  // for N >= 4, pairs of different triples sharing a face.
  std::map<FaceId, std::vector<CubeId>> flanks;
  for (const auto& entry : x.cube)
    for (const FaceId& f : faces_of_cube(entry.first))
      flanks[f].push_back(entry.first);

  int configurations = 0;
  for (const auto& [f, cubes] : flanks) {
    if (cubes.size() < 2) continue;
    for (std::size_t a = 0; a + 1 < cubes.size(); ++a)
      for (std::size_t b = a + 1; b < cubes.size(); ++b) {
        std::string label = cell_label(f) + "~" + cell_label(cubes[a]) + "~" +
                            cell_label(cubes[b]);
        Vec w = x.cube.at(cubes[b]) - x.cube.at(cubes[a]);
        double wn = w.norm();
        if (wn <= 1e-12) {
          rep.warn("coincident cube points at " + label);
          continue;
        }
        double worst = -1.0;
        for (const EdgeId& e : edges_of_face(f)) {
          auto [v0, v1] = vertices_of_edge(e);
          auto i0 = x.vertex.find(v0);
          auto i1 = x.vertex.find(v1);
          if (i0 == x.vertex.end() || i1 == x.vertex.end()) continue;
          Vec u = i1->second - i0->second;
          double un = u.norm();
          if (un <= 1e-12) {
            rep.warn("degenerate edge " + cell_label(e));
            continue;
          }
          worst = std::max(worst, std::abs(u.dot(w)) / (un * wn));
        }
        if (worst < 0.0) continue;
        ++configurations;
        rep.add(label, "edge_axis_cosine", worst, tol.orth);
      }
  }
  if (configurations == 0)
    rep.warn("no orthogonality configurations to check");
  return rep;
}

Ocs binet_to_ocs(const ConjugateBinet& b, const Tolerances& tol, Report* axes) {
  if (b.vertex.values.empty())
    throw GeometryError(ErrorCode::WrongLayer, "vertex half is empty");
  if (b.vertex.N() != 3)
    throw GeometryError(ErrorCode::WrongLayer,
                        "cube points pair with vertices of Z^3");
  if (b.vertex.pdim != 3 || b.face.pdim != 3)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        "orthogonal systems live in R^3");

  Ocs out;
  for (const auto& [v, p] : b.vertex.values)
    out.vertex.emplace(v, finite_affine(p, cell_label(v)));

  for (const auto& entry : b.vertex.values) {
    CubeId c{entry.first.at, 1, 2, 3};
    std::array<VertexId, 8> corners = vertices_of_cube(c);
    std::array<FaceId, 6> sides = faces_of_cube(c);
    bool complete = true;
    for (const VertexId& w : corners)
      if (!b.vertex.values.count(w)) {
        complete = false;
        break;
      }
    if (complete)
      for (const FaceId& f : sides)
        if (!b.face.values.count(f)) {
          complete = false;
          break;
        }
    if (!complete) continue;

    double diameter = 0.0;
    std::array<Vec, 8> pos;
    for (int i = 0; i < 8; ++i) pos[i] = out.vertex.at(corners[i]);
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        diameter = std::max(diameter, (pos[i] - pos[j]).norm());
    if (diameter <= 1e-12)
      throw GeometryError(ErrorCode::DegenerateAxes, "cube has zero diameter",
                          cell_label(c));

    // Each face contributes the line through its value orthogonal to its
    // quad plane; accumulate sum of (I - nn^T) for the least-squares meet.
    Mat normal_system = Mat::Zero(3, 3);
    Vec rhs = Vec::Zero(3);
    std::vector<std::pair<Vec, Mat>> axis_projectors;
    for (const FaceId& f : sides) {
      Vec pf = finite_affine(b.face.values.at(f), cell_label(f));
      std::array<VertexId, 4> quad = vertices_of_face(f);
      Mat spread(3, 4);
      for (int i = 0; i < 4; ++i) spread.col(i) = out.vertex.at(quad[i]);
      Vec centroid = spread.rowwise().mean();
      spread.colwise() -= centroid;
      Eigen::JacobiSVD<Mat> svd(spread, Eigen::ComputeFullU);
      const Vec& sv = svd.singularValues();
      if (sv(1) <= tol.rank * sv(0))
        throw GeometryError(ErrorCode::DegenerateAxes,
                            "face quad collapses to a line", cell_label(f));
      Vec n = svd.matrixU().col(2);
      Mat proj = Mat::Identity(3, 3) - n * n.transpose();
      normal_system += proj;
      rhs += proj * pf;
      axis_projectors.emplace_back(pf, proj);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(normal_system);
    if (es.eigenvalues()(0) <= 1e-12 * es.eigenvalues()(2))
      throw GeometryError(ErrorCode::DegenerateAxes,
                          "face axes leave a direction undetermined",
                          cell_label(c));
    Vec xc = normal_system.ldlt().solve(rhs);

    double worst = 0.0;
    for (const auto& [pf, proj] : axis_projectors)
      worst = std::max(worst, (proj * (xc - pf)).norm());
    double concurrency = worst / diameter;
    if (axes)
      axes->add(cell_label(c), "axis_concurrency", concurrency, tol.incidence);
    if (concurrency > tol.incidence)
      throw GeometryError(ErrorCode::NonGenericMeet,
                          "six face axes do not concur", cell_label(c));
    out.cube.emplace(c, xc);
  }
  return out;
}

Ocs binet_to_ocs_via_lift(const ConjugateBinet& b, double r0_sq,
                          const Tolerances& tol) {
  if (b.vertex.values.empty())
    throw GeometryError(ErrorCode::WrongLayer, "vertex half is empty");
  if (b.vertex.N() != 3)
    throw GeometryError(ErrorCode::WrongLayer,
                        "cube points pair with vertices of Z^3");
  // Certifies that the binet is principal: the lift must close up over every
  // non-tree incidence.  The numbers below are re-derived in sphere
  // coordinates rather than read off the lift, because the projective meets
  // in the lift accumulate error at the scale of |center|^2 coordinates.
  (void)moebius_lift(b, r0_sq, b.vertex.values.begin()->first, tol);

  Ocs out;
  for (const auto& [v, p] : b.vertex.values)
    out.vertex.emplace(v, finite_affine(p, cell_label(v)));
  std::map<FaceId, Vec> face_pos;
  for (const auto& [f, p] : b.face.values)
    face_pos.emplace(f, finite_affine(p, cell_label(f)));

  // Recover the squared radii of the lift spheres by walking the
  // vertex-face incidence graph: a vertex sphere meets the sphere of an
  // incident face orthogonally, so |x_v - y_f|^2 = rho_v + rho_f.  Starting
  // from the anchor radius this fixes every radius by plain arithmetic.
  // The family parameter shifts all vertex radii by one constant, which
  // survives each propagation step to rounding error and then drops out of
  // the radius differences in the radical system below.
  std::map<VertexId, std::vector<FaceId>> star;
  for (const auto& [f, y] : face_pos)
    for (const VertexId& w : vertices_of_face(f))
      if (out.vertex.count(w)) star[w].push_back(f);
  std::map<VertexId, double> rho_v;
  std::map<FaceId, double> rho_f;
  std::vector<VertexId> frontier{b.vertex.values.begin()->first};
  rho_v.emplace(frontier.front(), r0_sq);
  while (!frontier.empty()) {
    VertexId v = frontier.back();
    frontier.pop_back();
    auto it = star.find(v);
    if (it == star.end()) continue;
    const Vec& x = out.vertex.at(v);
    for (const FaceId& f : it->second) {
      const Vec& y = face_pos.at(f);
      if (!rho_f.emplace(f, (x - y).squaredNorm() - rho_v.at(v)).second)
        continue;
      for (const VertexId& w : vertices_of_face(f)) {
        auto jt = out.vertex.find(w);
        if (jt == out.vertex.end()) continue;
        if (rho_v
                .emplace(w, (jt->second - y).squaredNorm() - rho_f.at(f))
                .second)
          frontier.push_back(w);
      }
    }
  }

  for (const auto& [v, x0] : out.vertex) {
    CubeId c{v.at, 1, 2, 3};
    std::array<VertexId, 8> corners = vertices_of_cube(c);
    bool complete = true;
    for (const VertexId& w : corners)
      if (!rho_v.count(w)) {
        complete = false;
        break;
      }
    if (!complete) continue;
    // The cube point z satisfies |x_i - z|^2 = rho_i + sigma against every
    // corner sphere (x_i, rho_i).  Differences of these relations are linear
    // in z; the corner positions come straight from the binet, so between
    // two family parameters only the radius differences move, and those only
    // by accumulated rounding.
    Mat radical(7, 3);
    Vec rhs(7);
    const Vec& base = out.vertex.at(corners[0]);
    double rho0 = rho_v.at(corners[0]);
    for (int i = 1; i < 8; ++i) {
      const Vec& xi = out.vertex.at(corners[i]);
      radical.row(i - 1) = 2.0 * (xi - base).transpose();
      rhs[i - 1] = xi.squaredNorm() - base.squaredNorm() -
                   (rho_v.at(corners[i]) - rho0);
    }
    Eigen::JacobiSVD<Mat> svd(radical,
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(2) <= tol.rank * svd.singularValues()(0))
      throw GeometryError(ErrorCode::DegenerateCube,
                          "corner sphere centers do not span R^3",
                          cell_label(c));
    out.cube.emplace(c, svd.solve(rhs));
  }
  return out;
}

ConjugateBinet ocs_to_binet(const Ocs& x,
                            const std::map<FaceId, ProjPoint>& seeds,
                            const Block& block, const Tolerances& tol) {
  if (block.N() != 3)
    throw GeometryError(ErrorCode::WrongLayer,
                        "reconstruction runs on three-dimensional blocks");
  for (int side : block.sides)
    if (side < 3)
      throw GeometryError(ErrorCode::WrongLayer,
                          "reconstruction needs sides of length three or more");
  const int a1 = block.sides[0], a2 = block.sides[1], a3 = block.sides[2];

  for (const VertexId& v : block_vertices(block)) sized_value(x.vertex, v);
  for (const CubeId& c : block_cubes(block)) sized_value(x.cube, c);

  // Every 12-face value is confined to the line joining the two cube points
  // flanking it; the face identified with s sits between the cubes based at
  // s - e3 and s.
  auto constraint_line = [&](const Coord& s) {
    ProjPoint below = ProjPoint::from_affine(
        x.cube.at(CubeId{{s[0], s[1], s[2] - 1}, 1, 2, 3}));
    ProjPoint above =
        ProjPoint::from_affine(x.cube.at(CubeId{{s[0], s[1], s[2]}, 1, 2, 3}));
    ProjSubspace line = join(std::vector<ProjPoint>{below, above}, tol);
    if (line.dim() != 1)
      throw GeometryError(ErrorCode::NonGenericMeet,
                          "flanking cube points coincide",
                          cell_label(FaceId{s, 1, 2}));
    return line;
  };

  std::vector<FaceId> expected;
  for (int i = 0; i < a1; ++i) expected.push_back(FaceId{{i, 0, 1}, 1, 2});
  for (int j = 1; j < a2; ++j) expected.push_back(FaceId{{0, j, 1}, 1, 2});
  for (int k = 2; k < a3; ++k) expected.push_back(FaceId{{0, 0, k}, 1, 2});
  if (seeds.size() != expected.size())
    throw GeometryError(ErrorCode::WrongLayer,
                        "need exactly one seed per initial-row face");

  std::map<Coord, ProjPoint> h;  // identified 12-net over the frame
  for (const FaceId& f : expected) {
    auto it = seeds.find(f);
    if (it == seeds.end())
      throw GeometryError(ErrorCode::WrongLayer, "seed missing", cell_label(f));
    if (constraint_line(f.base).contains_residual(it->second) > tol.incidence)
      throw GeometryError(ErrorCode::SeedOffLine,
                          "seed leaves the line of its flanking cube points",
                          cell_label(f));
    h.emplace(f.base, it->second);
  }

  // A new value is the meet of its constraint line with the plane of the
  // three quad neighbours already known (the conjugacy condition on the
  // identified net).
  auto fill = [&](const Coord& s, const Coord& p, const Coord& q,
                  const Coord& r) {
    std::string where = cell_label(FaceId{s, 1, 2});
    ProjSubspace plane =
        join(std::vector<ProjPoint>{h.at(p), h.at(q), h.at(r)}, tol);
    if (plane.dim() != 2)
      throw GeometryError(ErrorCode::NonGenericMeet,
                          "quad neighbours do not span a plane", where);
    ProjSubspace hit = meet(constraint_line(s), plane, tol);
    if (hit.dim() != 0)
      throw GeometryError(ErrorCode::NonGenericMeet,
                          "constraint line misses the quad plane", where);
    h.emplace(s, hit.as_point());
  };

  // bottom layer s3 = 1, then the two walls s2 = 0 and s1 = 0
  for (int i = 1; i < a1; ++i)
    for (int j = 1; j < a2; ++j)
      fill({i, j, 1}, {i - 1, j - 1, 1}, {i, j - 1, 1}, {i - 1, j, 1});
  for (int k = 2; k < a3; ++k)
    for (int i = 1; i < a1; ++i)
      fill({i, 0, k}, {i - 1, 0, k - 1}, {i, 0, k - 1}, {i - 1, 0, k});
  for (int k = 2; k < a3; ++k)
    for (int j = 1; j < a2; ++j)
      fill({0, j, k}, {0, j - 1, k - 1}, {0, j, k - 1}, {0, j - 1, k});

  // interior: close cubes of the identified net, then confirm the new value
  // did not leave its line
  for (int k = 2; k < a3; ++k)
    for (int i = 1; i < a1; ++i)
      for (int j = 1; j < a2; ++j) {
        Coord s{i, j, k};
        std::array<ProjPoint, 7> corner = {
            h.at({i - 1, j - 1, k - 1}), h.at({i, j - 1, k - 1}),
            h.at({i - 1, j, k - 1}),     h.at({i - 1, j - 1, k}),
            h.at({i, j, k - 1}),         h.at({i, j - 1, k}),
            h.at({i - 1, j, k})};
        ProjPoint far = propagate_vertex_cube(corner, tol);
        if (constraint_line(s).contains_residual(far) > tol.incidence)
          throw GeometryError(
              ErrorCode::NonGenericMeet,
              "closed cube leaves the line of its flanking cube points",
              cell_label(FaceId{s, 1, 2}));
        h.emplace(s, far);
      }

  VertexNet identified;
  identified.pdim = 3;
  for (const auto& [s, p] : h) identified.values.emplace(VertexId{s}, p);
  FaceNet all_faces = extend_face_net(identified, 1, 2, 3, tol);

  // The result lives on the core block, where every face has both flanking
  // cubes inside the input data.
  ConjugateBinet out;
  out.vertex.pdim = 3;
  out.face.pdim = 3;
  Block core{{a1 - 2, a2 - 2, a3 - 2}};
  auto shifted = [](const Coord& c) {
    return Coord{c[0] + 1, c[1] + 1, c[2] + 1};
  };
  for (const VertexId& v : block_vertices(core)) {
    VertexId w{shifted(v.at)};
    out.vertex.values.emplace(w, ProjPoint::from_affine(x.vertex.at(w)));
  }
  for (const FaceId& f : block_faces(core)) {
    FaceId g{shifted(f.base), f.di, f.dj};
    auto it = all_faces.values.find(g);
    if (it == all_faces.values.end())
      throw GeometryError(ErrorCode::WrongLayer,
                          "extension did not reach the core block",
                          cell_label(g));
    out.face.values.emplace(g, it->second);
  }
  out.face.planes = derive_planes_from_faces(out.face, tol);
  return out;
}

OcsLift ocs_lift_of(const MoebiusLift& ml, const Tolerances& tol) {
  if (ml.chart.n() != 3)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        "cube poles live in the chart over R^3");
  OcsLift out{ml.lift.net.vertex.values, {}, ml.chart};
  const Quadric& quadric = ml.lift.quadric;
  const int N = ml.lift.net.vertex.N();
  for (const auto& entry : out.vertex) {
    const VertexId& v = entry.first;
    for (int d1 = 1; d1 <= N; ++d1)
      for (int d2 = d1 + 1; d2 <= N; ++d2)
        for (int d3 = d2 + 1; d3 <= N; ++d3) {
          CubeId c{v.at, d1, d2, d3};
          std::vector<ProjPoint> corners;
          corners.reserve(8);
          bool complete = true;
          for (const VertexId& w : vertices_of_cube(c)) {
            auto it = out.vertex.find(w);
            if (it == out.vertex.end()) {
              complete = false;
              break;
            }
            corners.push_back(it->second);
          }
          if (!complete) continue;
          ProjSubspace span = join(corners, tol);
          if (span.dim() != 3)
            throw GeometryError(ErrorCode::DegenerateCube,
                                "lifted corners span dimension " +
                                    std::to_string(span.dim()) +
                                    ", not a solid",
                                cell_label(c));
          out.cube.emplace(c, quadric.polar(span, tol).as_point());
        }
  }
  return out;
}

Ocs project_ocs_lift(const OcsLift& lift, const Tolerances&) {
  Ocs out;
  for (const auto& [v, p] : lift.vertex) {
    try {
      out.vertex.emplace(v, lift.chart.project_affine(p));
    } catch (const GeometryError& e) {
      throw GeometryError(e.code(), "value does not project to an affine point",
                          cell_label(v));
    }
  }
  for (const auto& [c, p] : lift.cube) {
    try {
      out.cube.emplace(c, lift.chart.project_affine(p));
    } catch (const GeometryError& e) {
      throw GeometryError(e.code(), "value does not project to an affine point",
                          cell_label(c));
    }
  }
  return out;
}

Report check_ocs_lift(const OcsLift& lift, const Tolerances& tol) {
  Report rep;
  const Quadric& quadric = lift.chart.quadric();
  int incidences = 0;
  for (const auto& [c, pc] : lift.cube)
    for (const VertexId& v : vertices_of_cube(c)) {
      auto it = lift.vertex.find(v);
      if (it == lift.vertex.end()) continue;
      ++incidences;
      rep.add(cell_label(v) + "~" + cell_label(c), "polarity_pairing",
              std::abs(quadric.pairing(it->second, pc)), tol.orth);
    }
  if (incidences == 0) rep.warn("no vertex-cube incidences present");
  return rep;
}

Report check_ocs_consistency(const Ocs& initial, int N, const Tolerances& tol,
                             double consistency_tol) {
  if (N < 4)
    throw GeometryError(
        ErrorCode::WrongLayer,
        "consistency drive needs at least four lattice directions");
  if (!initial.vertex.empty() && initial.N() != N)
    throw GeometryError(ErrorCode::WrongLayer,
                        "initial data does not live in Z^" + std::to_string(N));
  Block hyper{Coord(N, 1)};

  // Initial support: vertices with at most three nonzero coordinates and the
  // origin-based cubes -- the 3D coordinate volumes of the hypercube.
  std::vector<VertexId> base_vertices;
  for (const VertexId& v : block_vertices(hyper))
    if (coord_sum(v.at) <= 3) base_vertices.push_back(v);
  std::vector<CubeId> base_cubes;
  for (int d1 = 1; d1 <= N; ++d1)
    for (int d2 = d1 + 1; d2 <= N; ++d2)
      for (int d3 = d2 + 1; d3 <= N; ++d3)
        base_cubes.push_back(CubeId{Coord(N, 0), d1, d2, d3});
  for (const VertexId& v : base_vertices) sized_value(initial.vertex, v);
  for (const CubeId& c : base_cubes) sized_value(initial.cube, c);

  // The sphere lift of the vertex part: polarity against a cube value reads
  // |x_v - x_c|^2 = rho_v + rho_c on squared radii, so one radius (anchored
  // at the origin) determines the rest over the incidence graph.  Every
  // incidence beyond the spanning tree re-checks the relation; a lift that
  // cannot satisfy polarity shows up here.
  auto sqdist = [&](const VertexId& v, const CubeId& c) {
    return (initial.vertex.at(v) - initial.cube.at(c)).squaredNorm();
  };
  std::map<VertexId, double> rho_v;
  std::map<CubeId, double> rho_c;
  rho_v.emplace(VertexId{Coord(N, 0)}, 0.0);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const CubeId& c : base_cubes) {
      if (rho_c.count(c)) continue;
      for (const VertexId& v : vertices_of_cube(c)) {
        auto it = rho_v.find(v);
        if (it == rho_v.end()) continue;
        rho_c.emplace(c, sqdist(v, c) - it->second);
        grew = true;
        break;
      }
    }
    for (const CubeId& c : base_cubes) {
      auto ic = rho_c.find(c);
      if (ic == rho_c.end()) continue;
      for (const VertexId& v : vertices_of_cube(c)) {
        if (rho_v.count(v)) continue;
        rho_v.emplace(v, sqdist(v, c) - ic->second);
        grew = true;
      }
    }
  }

  Report rep;
  for (const CubeId& c : base_cubes)
    for (const VertexId& v : vertices_of_cube(c))
      rep.add(cell_label(v) + "~" + cell_label(c), "lift_polarity",
              std::abs(rho_v.at(v) + rho_c.at(c) - sqdist(v, c)),
              consistency_tol);

  MoebiusChart chart(3);
  VertexNet seed;
  seed.pdim = 4;
  for (const VertexId& v : base_vertices)
    seed.values.emplace(
        v, chart.lift_sphere(SphereRep{initial.vertex.at(v), rho_v.at(v)}));

  try {
    VertexNet full = propagate_vertex_net(seed, hyper, tol);

    // re-derive every deep vertex through each of its cubes
    for (const VertexId& v : block_vertices(hyper)) {
      std::vector<int> on;
      for (int d = 1; d <= N; ++d)
        if (v.at[d - 1] == 1) on.push_back(d);
      if (on.size() < 4) continue;
      const ProjPoint& stored = full.values.at(v);
      double worst = 0.0;
      for (std::size_t a = 0; a < on.size(); ++a)
        for (std::size_t b = a + 1; b < on.size(); ++b)
          for (std::size_t c = b + 1; c < on.size(); ++c) {
            Coord base = v.at;
            base[on[a] - 1] = base[on[b] - 1] = base[on[c] - 1] = 0;
            auto at = [&](int da, int db, int dc) {
              Coord w = base;
              w[on[a] - 1] = da;
              w[on[b] - 1] = db;
              w[on[c] - 1] = dc;
              return full.values.at(VertexId{w});
            };
            std::array<ProjPoint, 7> pts = {at(0, 0, 0), at(1, 0, 0),
                                            at(0, 1, 0), at(0, 0, 1),
                                            at(1, 1, 0), at(1, 0, 1),
                                            at(0, 1, 1)};
            worst = std::max(
                worst, point_distance(propagate_vertex_cube(pts, tol), stored));
          }
      rep.add(cell_label(v), "path_independence", worst, consistency_tol);
    }

    // poles of all cube spans, projected back; initial cubes keep their
    // input values in the final audit and are compared against the derived
    // centers
    const Quadric& quadric = chart.quadric();
    Ocs completed;
    for (const VertexId& v : block_vertices(hyper))
      completed.vertex.emplace(v, chart.project_affine(full.values.at(v)));
    for (const CubeId& c : block_cubes(hyper)) {
      std::vector<ProjPoint> corners;
      corners.reserve(8);
      for (const VertexId& w : vertices_of_cube(c))
        corners.push_back(full.values.at(w));
      ProjSubspace span = join(corners, tol);
      if (span.dim() != 3)
        throw GeometryError(ErrorCode::DegenerateCube,
                            "lifted corners span dimension " +
                                std::to_string(span.dim()) + ", not a solid",
                            cell_label(c));
      Vec center = chart.project_affine(quadric.polar(span, tol).as_point());
      auto it = initial.cube.find(c);
      if (coord_sum(c.base) == 0 && it != initial.cube.end()) {
        rep.add(cell_label(c), "cube_value_consistency",
                (center - it->second).norm(), consistency_tol);
        completed.cube.emplace(c, it->second);
      } else {
        completed.cube.emplace(c, center);
      }
    }
    rep.merge(check_ocs(completed, tol));
  } catch (const GeometryError& e) {
    rep.warn(std::string("completion failed: ") + e.what());
    rep.add(e.cell().empty() ? "completion" : e.cell(), "completion", 1.0, 0.0);
  }
  return rep;
}

}  // namespace binet
