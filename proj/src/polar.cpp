#include "binet/polar.hpp"

#include <string>

#include "binet/error.hpp"

namespace binet {

namespace {

std::string incidence_label(const VertexId& v, const FaceId& f) {
  return cell_label(v) + "~" + cell_label(f);
}

// Span of the quad of f from whichever of its corner values are present;
// empty unless at least three corners give a genuine plane.
ProjSubspace quad_span(const FaceId& f, const VertexMap& values,
                       const Tolerances& tol) {
  std::vector<ProjPoint> pts;
  for (const VertexId& w : vertices_of_face(f)) {
    auto it = values.find(w);
    if (it != values.end()) pts.push_back(it->second);
  }
  if (pts.size() < 3) return {};
  ProjSubspace s = join(pts, tol);
  return s.dim() == 2 ? s : ProjSubspace{};
}

}  // namespace

Report check_polarity(const PolarBinet& pb, const Tolerances& tol,
                      bool check_planes) {
  Report rep;
  const VertexMap& vertex_values = pb.net.vertex.values;
  for (const auto& [f, bf] : pb.net.face.values) {
    for (const VertexId& v : vertices_of_face(f)) {
      auto it = vertex_values.find(v);
      if (it == vertex_values.end()) continue;
      rep.add(incidence_label(v, f), "polarity_pairing",
              std::abs(pb.quadric.pairing(it->second, bf)), tol.orth);
    }
  }
  if (check_planes) {
    for (const auto& [v, plane] : pb.net.face.planes) {
      auto it = vertex_values.find(v);
      if (it == vertex_values.end()) continue;
      ProjSubspace polar_hyp =
          pb.quadric.polar(ProjSubspace::of_point(it->second), tol);
      rep.add(cell_label(v), "plane_polarity",
              polar_hyp.contains_residual(plane), tol.incidence);
    }
    for (const auto& [f, bf] : pb.net.face.values) {
      ProjSubspace span = quad_span(f, vertex_values, tol);
      if (span.is_empty()) continue;
      ProjSubspace polar_hyp = pb.quadric.polar(ProjSubspace::of_point(bf), tol);
      rep.add(cell_label(f), "quad_polarity", polar_hyp.contains_residual(span),
              tol.incidence);
    }
  }
  return rep;
}

PolarCubeCompletion propagate_polar_cube(const CubeId& cube,
                                         const PolarBinet& pb,
                                         const Tolerances& tol, Report* report,
                                         RankAudit* audit) {
  const VertexMap& vertex_values = pb.net.vertex.values;
  auto corners = vertices_of_cube(cube);
  std::array<ProjPoint, 7> pts;
  // vertices_of_cube counts binarily (bit 0 = first direction); the cube
  // completion wants x, x1, x2, x3, x12, x13, x23.
  constexpr int order[7] = {0, 1, 2, 4, 3, 5, 6};
  for (int k = 0; k < 7; ++k) {
    auto it = vertex_values.find(corners[size_t(order[k])]);
    if (it == vertex_values.end())
      throw GeometryError(ErrorCode::WrongLayer, "cube corner value missing",
                          cell_label(corners[size_t(order[k])]));
    pts[size_t(k)] = it->second;
  }

  PolarCubeCompletion out;
  out.far_vertex = propagate_vertex_cube(pts, tol, audit);
  FaceCubeCompletion faces =
      complete_face_cube(cube, pb.net.face.planes, tol, audit);
  out.far_faces = std::move(faces.far_faces);
  out.far_plane = std::move(faces.far_plane);

  if (report != nullptr) {
    const VertexId far = corners.back();
    auto value_of = [&](const VertexId& w) {
      return w == far ? out.far_vertex : vertex_values.at(w);
    };
    for (const auto& [f, bf] : out.far_faces) {
      std::vector<ProjPoint> quad;
      for (const VertexId& w : vertices_of_face(f)) {
        report->add(incidence_label(w, f), "polarity_pairing",
                    std::abs(pb.quadric.pairing(value_of(w), bf)), tol.orth);
        quad.push_back(value_of(w));
      }
      ProjSubspace span = join(quad, tol);
      if (span.dim() == 2)
        report->add(cell_label(f), "quad_polarity",
                    pb.quadric.polar(ProjSubspace::of_point(bf), tol)
                        .contains_residual(span),
                    tol.incidence);
    }
    report->add(cell_label(far), "plane_polarity",
                pb.quadric.polar(ProjSubspace::of_point(out.far_vertex), tol)
                    .contains_residual(out.far_plane),
                tol.incidence);
  }
  return out;
}

PolarBinet propagate_polar_net(const PolarBinet& initial, const Block& block,
                               const Tolerances& tol, RankAudit* audit) {
  // The two halves never read each other during propagation; the coupling is
  // a property of the result, not an ingredient of the construction.
  PolarBinet out;
  out.quadric = initial.quadric;
  out.net.vertex = propagate_vertex_net(initial.net.vertex, block, tol, audit);
  out.net.face = propagate_face_net(initial.net.face, block, tol, audit);
  return out;
}

PolarBinet polar_binet_from_vertex_net(const VertexNet& g, const Quadric& q,
                                       const Tolerances& tol) {
  if (g.pdim != 3 || q.pdim() != 3)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        "pole-of-plane construction needs ambient dimension 3");
  PolarBinet pb;
  pb.quadric = q;
  pb.net.vertex = g;
  pb.net.face.pdim = g.pdim;
  const int n = g.N();
  for (const auto& [v, pv] : g.values) {
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        FaceId f{v.at, i, j};
        bool complete = true;
        for (const VertexId& w : vertices_of_face(f))
          if (!g.values.count(w)) complete = false;
        if (!complete) continue;
        ProjSubspace span = quad_span(f, g.values, tol);
        if (span.is_empty())
          throw GeometryError(ErrorCode::NonGenericMeet,
                              "quad does not span a plane", cell_label(f));
        pb.net.face.values.emplace(f, q.polar(span, tol).as_point());
      }
    }
    pb.net.face.planes.emplace(v, q.polar(ProjSubspace::of_point(pv), tol));
  }
  return pb;
}

}  // namespace binet
