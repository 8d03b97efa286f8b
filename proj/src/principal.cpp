#include "binet/principal.hpp"

#include <array>
#include <cstdio>
#include <deque>
#include <variant>

namespace binet {
namespace {

std::string fmt_residual(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Vec finite_affine(const ProjPoint& p, const std::string& cell) {
  if (p.is_infinite(1e-12))
    throw GeometryError(ErrorCode::InfinitePoint, "value at chart infinity",
                        cell);
  return p.affine();
}

ProjPoint random_member_of(Rng& rng, const ProjSubspace& s) {
  Vec c = Vec::Zero(s.basis().rows());
  for (int k = 0; k < s.basis().cols(); ++k)
    c += rng.uniform(-1.0, 1.0) * s.basis().col(k);
  return ProjPoint(c);
}

std::string incidence_label(const VertexId& v, const FaceId& f) {
  return cell_label(v) + "~" + cell_label(f);
}

}  // namespace

Report check_principal(const ConjugateBinet& b, const Tolerances& tol) {
  Report rep;
  if (b.vertex.values.empty()) {
    rep.warn("no vertex values; nothing to check");
    return rep;
  }
  const int N = b.vertex.N();
  int crosses = 0;
  for (const auto& [v, pv] : b.vertex.values) {
    for (int dir = 1; dir <= N; ++dir) {
      VertexId w{unit_step(v.at, dir)};
      auto itw = b.vertex.values.find(w);
      if (itw == b.vertex.values.end()) continue;
      EdgeId e{v.at, dir};
      const std::string elabel = cell_label(e);
      Vec edge_dir = finite_affine(itw->second, cell_label(w)) -
                     finite_affine(pv, cell_label(v));
      double elen = edge_dir.norm();
      if (elen < 1e-14) {
        rep.warn("edge " + elabel + " has coincident endpoints; skipped");
        continue;
      }
      std::vector<std::pair<FaceId, ProjPoint>> incident;
      for (const FaceId& f : faces_of_edge(e, N)) {
        auto itf = b.face.values.find(f);
        if (itf != b.face.values.end()) incident.emplace_back(f, itf->second);
      }
      for (size_t s = 0; s < incident.size(); ++s) {
        Vec ps = finite_affine(incident[s].second,
                               cell_label(incident[s].first));
        for (size_t t = s + 1; t < incident.size(); ++t) {
          Vec d = finite_affine(incident[t].second,
                                cell_label(incident[t].first)) -
                  ps;
          double dn = d.norm();
          if (dn < 1e-14) {
            rep.warn("cross of " + elabel +
                     " has coincident face points; skipped");
            continue;
          }
          rep.add(elabel + "~" + cell_label(incident[s].first) + "~" +
                      cell_label(incident[t].first),
                  "cross_cosine", std::abs(edge_dir.dot(d)) / (elen * dn),
                  tol.orth);
          ++crosses;
        }
      }
      // Per-edge reduction: all face values of the edge on one line, the
      // meet of the plane field at the two endpoints.
      auto itp = b.face.planes.find(v);
      auto itq = b.face.planes.find(w);
      if (incident.size() >= 2 && itp != b.face.planes.end() &&
          itq != b.face.planes.end()) {
        ProjSubspace line = meet(itp->second, itq->second, tol);
        if (line.dim() == 1) {
          for (const auto& [f, pf] : incident)
            rep.add(elabel + "~" + cell_label(f), "cross_line_membership",
                    line.contains_residual(pf), tol.incidence);
        } else {
          rep.warn("planes at edge " + elabel + " meet in dimension " +
                   std::to_string(line.dim()) + "; reduction skipped");
        }
      }
    }
  }
  if (crosses == 0) rep.warn("no complete cross; orthogonality not exercised");
  return rep;
}

MoebiusLift moebius_lift(const ConjugateBinet& b, double r0_sq,
                         const VertexId& anchor, const Tolerances& tol) {
  if (b.vertex.values.empty())
    throw GeometryError(ErrorCode::WrongLayer, "no vertex values to lift");
  const int n = b.vertex.pdim;
  const int N = b.vertex.N();
  MoebiusChart chart(n);
  auto ita = b.vertex.values.find(anchor);
  if (ita == b.vertex.values.end())
    throw GeometryError(ErrorCode::WrongLayer, "anchor carries no value",
                        cell_label(anchor));

  VertexMap lift_v;
  FaceMap lift_f;
  std::map<VertexId, FaceId> vparent;  // how each vertex was first reached
  std::map<FaceId, VertexId> fparent;  // how each face was first reached
  lift_v.emplace(anchor, chart.lift_sphere({finite_affine(ita->second,
                                                          cell_label(anchor)),
                                            r0_sq}));
  std::deque<std::variant<VertexId, FaceId>> frontier;
  frontier.emplace_back(anchor);
  while (!frontier.empty()) {
    auto cell = frontier.front();
    frontier.pop_front();
    if (std::holds_alternative<VertexId>(cell)) {
      const VertexId v = std::get<VertexId>(cell);
      const ProjPoint sv = lift_v.at(v);
      for (const FaceId& f : faces_of_vertex(v, N)) {
        auto itf = b.face.values.find(f);
        if (itf == b.face.values.end() || lift_f.count(f)) continue;
        try {
          lift_f.emplace(f, chart.lift_through(itf->second, sv, tol));
        } catch (const GeometryError& e) {
          throw GeometryError(e.code(),
                              "face value does not lift through its corner",
                              incidence_label(v, f));
        }
        fparent.emplace(f, v);
        frontier.emplace_back(f);
      }
    } else {
      const FaceId f = std::get<FaceId>(cell);
      const ProjPoint sf = lift_f.at(f);
      for (const VertexId& v : vertices_of_face(f)) {
        auto itv = b.vertex.values.find(v);
        if (itv == b.vertex.values.end() || lift_v.count(v)) continue;
        try {
          lift_v.emplace(v, chart.lift_through(itv->second, sf, tol));
        } catch (const GeometryError& e) {
          // A corner cannot be lifted through a hyperplane-type neighbour:
          // a point sphere centered on a plane is orthogonal to it at every
          // radius, so the fiber lies inside the polar hyperplane.
          throw GeometryError(e.code(),
                              "corner does not lift through its face value",
                              incidence_label(v, f));
        }
        vparent.emplace(v, f);
        frontier.emplace_back(v);
      }
    }
  }

  if (lift_v.size() != b.vertex.values.size()) {
    for (const auto& [v, p] : b.vertex.values)
      if (!lift_v.count(v))
        throw GeometryError(ErrorCode::WrongLayer,
                            "vertex not reachable from the anchor",
                            cell_label(v));
  }
  if (lift_f.size() != b.face.values.size()) {
    for (const auto& [f, p] : b.face.values)
      if (!lift_f.count(f))
        throw GeometryError(ErrorCode::WrongLayer,
                            "face not reachable from the anchor",
                            cell_label(f));
  }

  // Every incidence not used for transport re-derives the face lift from the
  // vertex lift; the worst disagreement is the closure residual.
  double worst = 0.0;
  std::string worst_cell;
  for (const auto& [f, sf] : lift_f) {
    for (const VertexId& v : vertices_of_face(f)) {
      auto itv = lift_v.find(v);
      if (itv == lift_v.end()) continue;
      bool tree = fparent.at(f) == v ||
                  (vparent.count(v) && vparent.at(v) == f);
      if (tree) continue;
      ProjPoint re = chart.lift_through(b.face.values.at(f), itv->second, tol);
      double d = point_distance(re, sf);
      if (d > worst) {
        worst = d;
        worst_cell = incidence_label(v, f);
      }
    }
  }
  if (worst > tol.point)
    throw GeometryError(ErrorCode::ClosureFailure,
                        "worst path disagreement " + fmt_residual(worst),
                        worst_cell);

  PlaneField lifted_planes;
  for (const auto& [v, plane] : b.face.planes) {
    auto itv = lift_v.find(v);
    if (itv == lift_v.end()) continue;
    lifted_planes.emplace(
        v, chart.lift_subspace_through(plane, itv->second, tol));
  }

  return MoebiusLift{
      PolarBinet{ConjugateBinet{VertexNet{n + 1, std::move(lift_v)},
                                FaceNet{n + 1, std::move(lift_f),
                                        std::move(lifted_planes)}},
                 chart.quadric()},
      chart, anchor, r0_sq, worst};
}

ConjugateBinet project_polar_binet(const PolarBinet& pb,
                                   const MoebiusChart& chart,
                                   const Tolerances& tol) {
  ConjugateBinet out;
  out.vertex.pdim = chart.n();
  out.face.pdim = chart.n();
  for (const auto& [v, s] : pb.net.vertex.values)
    out.vertex.values.emplace(v, chart.project_hom(s));
  for (const auto& [f, s] : pb.net.face.values)
    out.face.values.emplace(f, chart.project_hom(s));
  for (const auto& [v, plane] : pb.net.face.planes) {
    ProjSubspace p = chart.project_subspace(plane, tol);
    // A plane through the projection center flattens to a line; drop it.
    if (p.dim() == 2) out.face.planes.emplace(v, p);
  }
  return out;
}

MoebiusLift extend_lift(const MoebiusLift& ml, const Block& block,
                        const Tolerances& tol, RankAudit* audit) {
  return MoebiusLift{propagate_polar_net(ml.lift, block, tol, audit), ml.chart,
                     ml.anchor, ml.family_parameter, ml.closure_residual};
}

ConjugateBinet build_principal(const ConjugateBinet& initial,
                               const Block& block, const Tolerances& tol,
                               double r0_sq) {
  if (initial.vertex.values.empty())
    throw GeometryError(ErrorCode::WrongLayer, "no initial vertex values");
  MoebiusLift ml = moebius_lift(initial, r0_sq,
                                initial.vertex.values.begin()->first, tol);
  MoebiusLift full = extend_lift(ml, block, tol);
  ConjugateBinet out = project_polar_binet(full.lift, full.chart, tol);
  for (const auto& [v, p] : out.vertex.values)
    if (p.is_infinite(1e-12))
      throw GeometryError(ErrorCode::InfinitePoint,
                          "projected vertex at chart infinity", cell_label(v));
  for (const auto& [f, p] : out.face.values)
    if (p.is_infinite(1e-12))
      throw GeometryError(ErrorCode::InfinitePoint,
                          "projected face value at chart infinity",
                          cell_label(f));
  return out;
}

Report symmetric_extension_check(const VertexNet& g, const VertexNet& h,
                                 int i, int j, const Tolerances& tol) {
  if (g.values.empty() || h.values.empty())
    throw GeometryError(ErrorCode::WrongLayer,
                        "both halves need values to compare extensions");
  const int N = g.N();
  if (h.N() != N)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        "halves live on lattices of different dimension");
  if (g.pdim != h.pdim)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        "halves live in different projective spaces");
  if (i < 1 || j <= i || j > N)
    throw GeometryError(ErrorCode::WrongLayer,
                        "identification directions out of range");

  // Inconsistent halves can make the extension itself impossible (skew
  // diagonals, stars off their planes); that counts as the side rejecting.
  auto run_side = [&](const VertexNet& vertices, const VertexNet& identified)
      -> std::pair<bool, std::string> {
    try {
      ConjugateBinet net{vertices, extend_face_net(identified, i, j, N, tol)};
      Report r = check_principal(net, tol);
      return {r.pass, "max residual " + fmt_residual(r.max_residual())};
    } catch (const GeometryError& e) {
      return {false, std::string("extension rejected: ") + e.what()};
    }
  };

  auto [pass_a, note_a] = run_side(g, h);

  // On the identified lattice the ij-face at base s surrounds the original
  // vertex s + e_i + e_j, so the face half of the swapped binet is the
  // extension of g pulled back by that shift.
  VertexNet gs;
  gs.pdim = g.pdim;
  for (const auto& [v, p] : g.values)
    gs.values.emplace(VertexId{unit_step(unit_step(v.at, i, -1), j, -1)}, p);
  auto [pass_b, note_b] = run_side(h, gs);

  Report rep;
  rep.warn("kept vertices: " + std::string(pass_a ? "pass" : "fail") + ", " +
           note_a);
  rep.warn("kept faces: " + std::string(pass_b ? "pass" : "fail") + ", " +
           note_b);
  rep.add("extension_pair", "verdict_agreement",
          pass_a == pass_b ? 0.0 : 1.0, 0.0);
  return rep;
}

CircleAxis face_circle_axis(const MoebiusLift& ml, const FaceId& f,
                            const Tolerances& tol) {
  if (ml.chart.n() != 3)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        "circle axes need a three-dimensional chart");
  std::vector<ProjPoint> lifts;
  for (const VertexId& v : vertices_of_face(f)) {
    auto it = ml.lift.net.vertex.values.find(v);
    if (it == ml.lift.net.vertex.values.end())
      throw GeometryError(ErrorCode::WrongLayer, "face corner not lifted",
                          cell_label(v));
    lifts.push_back(it->second);
  }
  ProjSubspace plane = join(lifts, tol);
  if (plane.dim() != 2)
    throw GeometryError(ErrorCode::NonGenericMeet,
                        "lifted corners span dimension " +
                            std::to_string(plane.dim()) + ", not a plane",
                        cell_label(f));
  auto itf = ml.lift.net.face.values.find(f);
  if (itf == ml.lift.net.face.values.end())
    throw GeometryError(ErrorCode::WrongLayer, "face carries no lifted value",
                        cell_label(f));
  Vec through = ml.chart.project_affine(itf->second);

  Mat pts(4, 3);
  for (int k = 0; k < 4; ++k)
    pts.row(k) = ml.chart.project_affine(lifts[k]).transpose();
  Vec centroid = pts.colwise().mean();
  Mat centered = pts.rowwise() - centroid.transpose();
  Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(1) <= tol.rank * sv(0))
    throw GeometryError(ErrorCode::NonGenericMeet,
                        "base quad corners are collinear", cell_label(f));
  Vec direction = svd.matrixV().col(2);
  return CircleAxis{f, plane, through, direction};
}

CubeSphere cube_sphere(const MoebiusLift& ml, const CubeId& c,
                       const Tolerances& tol) {
  if (ml.chart.n() != 3)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        "cube spheres need a three-dimensional chart");
  std::vector<ProjPoint> lifts;
  for (const VertexId& v : vertices_of_cube(c)) {
    auto it = ml.lift.net.vertex.values.find(v);
    if (it == ml.lift.net.vertex.values.end())
      throw GeometryError(ErrorCode::WrongLayer, "cube corner not lifted",
                          cell_label(v));
    lifts.push_back(it->second);
  }
  ProjSubspace span = join(lifts, tol);
  if (span.dim() != 3)
    throw GeometryError(ErrorCode::DegenerateCube,
                        "eight lifted vertices span dimension " +
                            std::to_string(span.dim()) + ", not a 3-space",
                        cell_label(c));
  ProjSubspace pole = ml.lift.quadric.polar(span, tol);
  if (pole.dim() != 0)
    throw GeometryError(ErrorCode::NonGenericMeet,
                        "polar of the cube span is not a point",
                        cell_label(c));
  SphereRep s = ml.chart.sphere_of(pole.as_point());
  return CubeSphere{c, s.center, s.sq_radius};
}

PolarBinet generate_polar_lift(const Block& block, int n, Rng& rng,
                               const Tolerances& tol) {
  const int N = block.N();
  if (N > 3)
    throw GeometryError(ErrorCode::WrongLayer,
                        "face marching supports at most three directions; "
                        "propagate a three-dimensional seed instead");
  MoebiusChart chart(n);
  PolarBinet out;
  out.quadric = chart.quadric();
  out.net.vertex = propagate_vertex_net(
      generate_conjugate_initial(block, n + 1, rng), block, tol);
  out.net.face.pdim = n + 1;

  auto star_values = [&](const VertexId& u) {
    std::vector<ProjPoint> star;
    for (const FaceId& g : faces_of_vertex(u, N)) {
      auto it = out.net.face.values.find(g);
      if (it != out.net.face.values.end()) star.push_back(it->second);
    }
    return star;
  };

  // Each value lies on the polar line of its quad.  On top of that, two
  // kinds of already-decided data pin it down further: once a vertex star
  // holds values in general position, its plane is fixed and every later
  // value of that star must lie in it; and the values of all faces around
  // one edge lie on the meet line of the two endpoint planes, so as soon as
  // two of them are placed the rest of that pencil is confined to their
  // line.  A star that only holds such a collinear pencil does not pin a
  // plane yet, which is why the plane constraint keys on the span dimension
  // and not on the value count.  Whatever freedom the meets leave is
  // boundary freedom, filled at random.
  for (const FaceId& f : block_faces(block)) {
    std::vector<ProjPoint> corners;
    for (const VertexId& u : vertices_of_face(f))
      corners.push_back(out.net.vertex.values.at(u));
    ProjSubspace qspan = join(corners, tol);
    if (qspan.dim() != 2)
      throw GeometryError(ErrorCode::NonGenericMeet,
                          "random quad does not span a plane", cell_label(f));
    std::vector<ProjSubspace> parts{out.quadric.polar(qspan, tol)};
    for (const VertexId& u : vertices_of_face(f)) {
      std::vector<ProjPoint> star = star_values(u);
      if (star.size() < 3) continue;
      ProjSubspace span = join(star, tol);
      if (span.dim() > 2)
        throw GeometryError(ErrorCode::NonGenericMeet,
                            "vertex star left its plane", cell_label(u));
      if (span.dim() == 2) parts.push_back(span);
    }
    const std::array<EdgeId, 4> edges = {
        EdgeId{f.base, f.di}, EdgeId{f.base, f.dj},
        EdgeId{unit_step(f.base, f.dj), f.di},
        EdgeId{unit_step(f.base, f.di), f.dj}};
    for (const EdgeId& e : edges) {
      std::vector<ProjPoint> pencil;
      for (const FaceId& g : faces_of_edge(e, N)) {
        auto it = out.net.face.values.find(g);
        if (it != out.net.face.values.end()) pencil.push_back(it->second);
      }
      if (pencil.size() < 2) continue;
      ProjSubspace line = join(pencil, tol);
      if (line.dim() > 1)
        throw GeometryError(ErrorCode::NonGenericMeet,
                            "edge pencil is not collinear", cell_label(e));
      if (line.dim() == 1) parts.push_back(line);
    }
    ProjSubspace sol = meet(parts, tol);
    if (sol.is_empty())
      throw GeometryError(ErrorCode::NonGenericMeet,
                          "face constraints have no common solution",
                          cell_label(f));
    out.net.face.values.emplace(
        f, sol.dim() == 0 ? sol.as_point() : random_member_of(rng, sol));
  }

  out.net.face.planes = derive_planes_from_faces(out.net.face, tol);
  return out;
}

}  // namespace binet
