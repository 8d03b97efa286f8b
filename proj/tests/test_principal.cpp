#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

#include "binet/principal.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace binet;
using namespace binet::testing;

namespace {

Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

// Sphere inversion y = c + (x - c)/|x - c|^2, a Moebius map of R^3; it sends
// the integer grid to a circular net (concircular quads).
Vec invert_about(const Vec& c, const Vec& x) {
  Vec d = x - c;
  return c + d / d.squaredNorm();
}

// Circular binet: inverted grid vertices.  Each grid face lies in a
// coordinate plane, whose inversion image is a sphere through the inverted
// quad; the face value is that sphere's center c + n/(2 delta) with delta
// the signed distance of c from the plane.  All faces in one plane share
// one value, so every vertex star consists of three points and spans an
// honest plane.
ConjugateBinet inverted_grid_binet(const Block& block, const Vec& center,
                                   const Tolerances& tol) {
  ConjugateBinet out;
  out.vertex.pdim = 3;
  out.face.pdim = 3;
  auto image = [&](const Coord& at) {
    Vec x(3);
    for (int k = 0; k < 3; ++k) x[k] = double(at[k]);
    return invert_about(center, x);
  };
  for (const VertexId& v : block_vertices(block))
    out.vertex.values.emplace(v, ProjPoint::from_affine(image(v.at)));
  for (const FaceId& f : block_faces(block)) {
    int off = 6 - f.di - f.dj;  // direction normal to the face's grid plane
    double delta = double(f.base[off - 1]) - center[off - 1];
    REQUIRE(std::abs(delta) > 1e-6);
    Vec value = center;
    value[off - 1] += 1.0 / (2.0 * delta);
    // the image sphere passes through the inverted corners
    for (const VertexId& v : vertices_of_face(f))
      REQUIRE(std::abs((image(v.at) - value).norm() -
                       1.0 / (2.0 * std::abs(delta))) < 1e-10);
    out.face.values.emplace(f, ProjPoint::from_affine(value));
  }
  out.face.planes = derive_planes_from_faces(out.face, tol);
  return out;
}

// Grid data on the coordinate planes: integer vertices, and for each face
// the infinite point of its circle axis (the normal of the grid plane the
// face lies in).  Every vertex star then spans the plane at infinity, which
// doubles as the plane field.  This is the fully degenerate circular net
// whose lift consists of the coordinate planes themselves.
ConjugateBinet cartesian_grid_initial(const Block& block) {
  ConjugateBinet out;
  out.vertex.pdim = 3;
  out.face.pdim = 3;
  for (const VertexId& v : coordinate_plane_vertices(block)) {
    Vec x(3);
    for (int k = 0; k < 3; ++k) x[k] = double(v.at[k]);
    out.vertex.values.emplace(v, ProjPoint::from_affine(x));
  }
  for (const FaceId& f : coordinate_plane_faces(block)) {
    Vec h = Vec::Zero(4);
    h[6 - f.di - f.dj] = 1.0;  // h0 stays zero: the axis direction at infinity
    out.face.values.emplace(f, ProjPoint(h));
  }
  Mat infinity = Mat::Zero(4, 3);
  infinity.block(1, 0, 3, 3) = Mat::Identity(3, 3);
  ProjSubspace at_infinity = ProjSubspace::span_of(infinity, Tolerances{});
  for (const VertexId& v : coordinate_plane_vertices(block))
    out.face.planes.emplace(v, at_infinity);
  return out;
}

// Generic principal binet: a random polar binet with respect to the absolute
// quadric, projected to the chart.
ConjugateBinet random_principal_binet(std::uint64_t seed, const Block& block,
                                      const Tolerances& tol) {
  Rng rng(seed);
  PolarBinet full = generate_polar_lift(block, 3, rng, tol);
  return project_polar_binet(full, MoebiusChart(3), tol);
}

ConjugateBinet apply_homography(const ConjugateBinet& b, const Mat& h,
                                const Tolerances& tol) {
  ConjugateBinet out;
  out.vertex.pdim = b.vertex.pdim;
  out.face.pdim = b.face.pdim;
  for (const auto& [v, p] : b.vertex.values)
    out.vertex.values.emplace(v, ProjPoint(h * p.h()));
  for (const auto& [f, p] : b.face.values)
    out.face.values.emplace(f, ProjPoint(h * p.h()));
  for (const auto& [v, plane] : b.face.planes)
    out.face.planes.emplace(
        v, ProjSubspace::span_of(h * plane.basis(), tol));
  return out;
}

Mat similarity_matrix(double scale, const Mat& rot, const Vec& shift) {
  Mat h = Mat::Zero(4, 4);
  h(0, 0) = 1.0;
  h.block(1, 1, 3, 3) = scale * rot;
  h.block(1, 0, 3, 1) = shift;
  return h;
}

double distance_to_axis(const Vec& point, const CircleAxis& axis) {
  Vec d = point - axis.through;
  return (d - d.dot(axis.direction) * axis.direction).norm();
}

ProjPoint nudge(const ProjPoint& p, double delta) {
  Vec y = p.affine();
  y[0] += delta;
  return ProjPoint::from_affine(y);
}

}  // namespace

TEST_CASE("one quad transports the anchor radius across the orthogonality") {
  Tolerances tol;
  ConjugateBinet b;
  b.vertex.pdim = 2;
  b.face.pdim = 2;
  Vec bv(2), bf(2);
  bv << 0.0, 0.0;
  bf << 1.0, 0.0;
  VertexId v{{0, 0}};
  b.vertex.values.emplace(v, ProjPoint::from_affine(bv));
  b.face.values.emplace(FaceId{{0, 0}, 1, 2}, ProjPoint::from_affine(bf));

  MoebiusLift ml = moebius_lift(b, 0.25, v, tol);
  SphereRep sv = ml.chart.sphere_of(ml.lift.net.vertex.values.at(v));
  CHECK((sv.center - bv).norm() < 1e-12);
  CHECK(sv.sq_radius == doctest::Approx(0.25).epsilon(1e-12));
  SphereRep sf =
      ml.chart.sphere_of(ml.lift.net.face.values.at(FaceId{{0, 0}, 1, 2}));
  CHECK((sf.center - bf).norm() < 1e-12);
  // |c_f - c_v|^2 = r_v^2 + r_f^2 forces r_f^2 = 1 - 0.25
  CHECK(sf.sq_radius == doctest::Approx(0.75).epsilon(1e-12));

  MoebiusLift flat = moebius_lift(b, 0.0, v, tol);
  SphereRep sf0 =
      flat.chart.sphere_of(flat.lift.net.face.values.at(FaceId{{0, 0}, 1, 2}));
  CHECK(sf0.sq_radius == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projections of random polar data are principal and lift back") {
  Tolerances tol;
  Block block{{2, 2, 2}};
  for (std::uint64_t seed = 900; seed < 906; ++seed) {
    ConjugateBinet base = random_principal_binet(seed, block, tol);

    Report rep = check_principal(base, tol);
    CHECK(rep.pass);
    CHECK(rep.max_residual() < 1e-8);

    VertexId anchor{{0, 0, 0}};
    MoebiusLift a = moebius_lift(base, 0.7, anchor, tol);
    MoebiusLift b = moebius_lift(base, -0.3, anchor, tol);
    CHECK(a.closure_residual < 1e-8);
    CHECK(b.closure_residual < 1e-8);

    // the lift is itself a conjugate binet, polar with respect to M
    CHECK(check_binet(a.lift.net, tol).pass);
    CHECK(check_polarity(a.lift, tol, true).pass);

    // distinct members of the family, identical projections
    CHECK(point_distance(a.lift.net.vertex.values.at(anchor),
                         b.lift.net.vertex.values.at(anchor)) > 1e-3);
    for (const auto* ml : {&a, &b}) {
      ConjugateBinet back = project_polar_binet(ml->lift, ml->chart, tol);
      for (const auto& [v, p] : base.vertex.values)
        CHECK(point_distance(p, back.vertex.values.at(v)) < 1e-10);
      for (const auto& [f, p] : base.face.values)
        CHECK(point_distance(p, back.face.values.at(f)) < 1e-10);
    }

    // anchoring elsewhere changes the member, not the projection
    VertexId other{{1, 1, 0}};
    MoebiusLift c = moebius_lift(base, 0.7, other, tol);
    ConjugateBinet back = project_polar_binet(c.lift, c.chart, tol);
    for (const auto& [v, p] : base.vertex.values)
      CHECK(point_distance(p, back.vertex.values.at(v)) < 1e-10);
  }
}

TEST_CASE("lift closure detects non-principal data") {
  Tolerances tol;
  Block block{{2, 2, 2}};
  ConjugateBinet base = random_principal_binet(31, block, tol);
  VertexId anchor{{0, 0, 0}};
  FaceId victim{{1, 1, 0}, 1, 2};

  ConjugateBinet tiny = base;
  tiny.face.values.at(victim) = nudge(tiny.face.values.at(victim), 1e-11);
  MoebiusLift ml = moebius_lift(tiny, 0.5, anchor, tol);
  CHECK(ml.closure_residual > 0.0);
  CHECK(ml.closure_residual < 1e-8);

  for (double delta : {1e-3, 1e-2}) {
    ConjugateBinet bad = base;
    bad.face.values.at(victim) = nudge(bad.face.values.at(victim), delta);
    bool thrown = false;
    try {
      (void)moebius_lift(bad, 0.5, anchor, tol);
    } catch (const GeometryError& e) {
      thrown = true;
      CHECK(e.code() == ErrorCode::ClosureFailure);
    }
    CHECK(thrown);
    // and the direct verdict agrees with the lift obstruction
    CHECK(!check_principal(bad, tol).pass);
  }
}

TEST_CASE("coordinate-plane data rebuilds the whole principal binet") {
  Tolerances tol;
  Block block{{2, 2, 2}};
  for (std::uint64_t seed = 70; seed < 75; ++seed) {
    ConjugateBinet full = random_principal_binet(seed, block, tol);
    ConjugateBinet initial = restrict_binet_to_initial(full, block);
    ConjugateBinet rebuilt = build_principal(initial, block, tol, 0.5);

    for (const auto& [v, p] : full.vertex.values)
      CHECK(point_distance(p, rebuilt.vertex.values.at(v)) < 1e-7);
    for (const auto& [f, p] : full.face.values)
      CHECK(point_distance(p, rebuilt.face.values.at(f)) < 1e-7);
    for (const auto& [v, plane] : rebuilt.face.planes)
      CHECK(subspace_distance(plane, full.face.planes.at(v)) < 1e-6);
    CHECK(check_principal(rebuilt, tol).pass);
  }
}

TEST_CASE("building commutes with similarities of the chart") {
  Tolerances tol;
  Block block{{2, 2, 2}};
  ConjugateBinet full = random_principal_binet(123, block, tol);
  ConjugateBinet initial = restrict_binet_to_initial(full, block);

  Eigen::Matrix3d rot =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized())
          .toRotationMatrix();
  Mat h = similarity_matrix(1.7, rot, vec3(0.3, -1.1, 0.45));

  ConjugateBinet moved = build_principal(apply_homography(initial, h, tol),
                                         block, tol, 0.8);
  ConjugateBinet reference = apply_homography(full, h, tol);
  for (const auto& [v, p] : reference.vertex.values)
    CHECK(point_distance(p, moved.vertex.values.at(v)) < 1e-7);
  for (const auto& [f, p] : reference.face.values)
    CHECK(point_distance(p, moved.face.values.at(f)) < 1e-7);
}

TEST_CASE("point-sphere lifts of a circular net stay on the absolute quadric") {
  Tolerances tol;
  Block block{{2, 2, 2}};
  ConjugateBinet circ = inverted_grid_binet(block, vec3(-0.4, -0.7, -0.9), tol);

  CHECK(check_binet(circ, tol).pass);
  CHECK(check_principal(circ, tol).pass);

  MoebiusLift ml = moebius_lift(circ, 0.0, VertexId{{0, 0, 0}}, tol);
  const Quadric& m = ml.lift.quadric;
  for (const auto& [v, s] : ml.lift.net.vertex.values)
    CHECK(m.on_quadric_residual(s) < 1e-8);

  // each face sphere is centered at the face value and passes through the
  // quad corners: it is the inversion image of the face's grid plane
  for (const auto& [f, s] : ml.lift.net.face.values) {
    SphereRep sphere = ml.chart.sphere_of(s);
    Vec cc = circ.face.values.at(f).affine();
    CHECK((sphere.center - cc).norm() < 1e-9);
    Vec corner = circ.vertex.values.at(vertices_of_face(f)[0]).affine();
    CHECK(std::abs(sphere.sq_radius - (corner - cc).squaredNorm()) < 1e-9);
  }
}

TEST_CASE("cube spheres pass through circular vertices and collect the axes") {
  Tolerances tol;
  Block block{{2, 2, 2}};
  ConjugateBinet circ = inverted_grid_binet(block, vec3(-0.4, -0.7, -0.9), tol);
  MoebiusLift ml = moebius_lift(circ, 0.0, VertexId{{0, 0, 0}}, tol);

  for (const CubeId& c : block_cubes(block)) {
    CubeSphere cs = cube_sphere(ml, c, tol);
    auto corners = vertices_of_cube(c);
    double diameter = 0.0;
    for (const VertexId& v : corners)
      for (const VertexId& w : corners)
        diameter = std::max(diameter, (circ.vertex.values.at(v).affine() -
                                       circ.vertex.values.at(w).affine())
                                          .norm());
    for (const VertexId& v : corners) {
      Vec x = circ.vertex.values.at(v).affine();
      CHECK(std::abs((x - cs.center).squaredNorm() - cs.sq_radius) < 1e-8);
    }
    for (const FaceId& f : faces_of_cube(c)) {
      CircleAxis axis = face_circle_axis(ml, f, tol);
      CHECK(distance_to_axis(cs.center, axis) < 1e-8 * diameter);
      // the lifted corners sit inside the circle plane
      for (const VertexId& v : vertices_of_face(f))
        CHECK(axis.circle_plane.contains_residual(
                  ml.lift.net.vertex.values.at(v)) < 1e-10);
    }
  }
}

TEST_CASE("a cube translated onto its sphere center sends all axes through "
          "the origin") {
  Tolerances tol;
  Block block{{1, 1, 1}};
  ConjugateBinet circ = inverted_grid_binet(block, vec3(-0.5, -0.8, -1.1), tol);
  MoebiusLift ml = moebius_lift(circ, 0.0, VertexId{{0, 0, 0}}, tol);
  CubeId cube{{0, 0, 0}, 1, 2, 3};
  CubeSphere cs = cube_sphere(ml, cube, tol);

  Mat h = similarity_matrix(1.0, Mat::Identity(3, 3), -cs.center);
  ConjugateBinet centered = apply_homography(circ, h, tol);
  MoebiusLift mlc = moebius_lift(centered, 0.0, VertexId{{0, 0, 0}}, tol);
  CubeSphere csc = cube_sphere(mlc, cube, tol);
  CHECK(csc.center.norm() < 1e-9);
  for (const FaceId& f : faces_of_cube(cube)) {
    CircleAxis axis = face_circle_axis(mlc, f, tol);
    CHECK(distance_to_axis(Vec::Zero(3), axis) < 1e-8);
  }
}

TEST_CASE("four concircular points put the axis through the circle center") {
  Tolerances tol;
  ConjugateBinet b;
  b.vertex.pdim = 3;
  b.face.pdim = 3;
  const double angles[4] = {0.3, 1.1, 2.4, 4.0};
  Coord corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (int k = 0; k < 4; ++k)
    b.vertex.values.emplace(
        VertexId{corners[k]},
        ProjPoint::from_affine(
            vec3(std::cos(angles[k]), std::sin(angles[k]), 0.0)));
  FaceId f{{0, 0}, 1, 2};
  b.face.values.emplace(f, ProjPoint::from_affine(Vec::Zero(3)));

  MoebiusLift ml = moebius_lift(b, 0.0, VertexId{{0, 0}}, tol);
  CircleAxis axis = face_circle_axis(ml, f, tol);
  CHECK(axis.through.norm() < 1e-12);
  CHECK(std::abs(std::abs(axis.direction[2]) - 1.0) < 1e-12);
}

TEST_CASE("the integer grid lifts to the coordinate planes and keeps its "
          "focal points at infinity") {
  Tolerances tol;
  Block block{{2, 2, 2}};
  ConjugateBinet initial = cartesian_grid_initial(block);

  // the orthogonality check works on affine positions and must refuse the
  // infinite face values rather than silently skip them
  CHECK_THROWS_AS((void)check_principal(initial, tol), GeometryError);

  // the breadth-first lift must refuse this net: a point sphere centered on
  // a plane is orthogonal to it at every radius, so no incidence pins a
  // fiber down
  bool ambiguous = false;
  try {
    (void)moebius_lift(initial, 0.0, VertexId{{0, 0, 0}}, tol);
  } catch (const GeometryError& e) {
    ambiguous = true;
    CHECK(e.code() == ErrorCode::NonGenericMeet);
    CHECK(!e.cell().empty());
  }
  CHECK(ambiguous);

  // assemble the lift directly instead: point spheres at the grid points,
  // the grid planes as face elements, and the pencils of planes through
  // each grid point as the plane field
  MoebiusChart chart(3);
  PolarBinet seed{ConjugateBinet{}, chart.quadric()};
  seed.net.vertex.pdim = 4;
  seed.net.face.pdim = 4;
  for (const auto& [v, p] : initial.vertex.values)
    seed.net.vertex.values.emplace(v, chart.lift_point(p.affine()));
  for (const auto& [f, p] : initial.face.values) {
    int off = 6 - f.di - f.dj;
    Vec plane_vec = Vec::Zero(5);
    plane_vec[0] = plane_vec[4] = double(f.base[off - 1]);
    plane_vec[off] = 1.0;
    seed.net.face.values.emplace(f, ProjPoint(plane_vec));
  }
  for (const auto& [v, s] : seed.net.vertex.values)
    seed.net.face.planes.emplace(
        v, chart.lift_subspace_through(initial.face.planes.at(v), s, tol));
  CHECK(check_polarity(seed, tol, true).pass);

  MoebiusLift ml{seed, chart, VertexId{{0, 0, 0}}, 0.0, 0.0};
  MoebiusLift full = extend_lift(ml, block, tol);

  // interior vertices land back on the integer grid, still as point spheres
  for (const auto& [v, s] : full.lift.net.vertex.values) {
    CHECK(full.lift.quadric.on_quadric_residual(s) < 1e-8);
    Vec x(3);
    for (int k = 0; k < 3; ++k) x[k] = double(v.at[k]);
    CHECK((full.chart.project_affine(s) - x).norm() < 1e-9);
  }
  // every face lift is the grid plane the face lies in, a hyperplane-type
  // element whose projection is the infinite point of the plane's normal
  int infinite = 0;
  for (const auto& [f, s] : full.lift.net.face.values) {
    int off = 6 - f.di - f.dj;
    Vec plane_vec = Vec::Zero(5);
    plane_vec[0] = plane_vec[4] = double(f.base[off - 1]);
    plane_vec[off] = 1.0;
    CHECK(point_distance(s, ProjPoint(plane_vec)) < 1e-8);
    ProjPoint image = full.chart.project_hom(s);
    CHECK(image.is_infinite(1e-8));
    CHECK(std::abs(image.h()[off]) > 1.0 - 1e-8);
    ++infinite;
  }
  CHECK(infinite == int(block_faces(block).size()));

  // the full pipeline starts from the breadth-first lift, so it must refuse
  // the degenerate net as well instead of handing out infinite points
  bool thrown = false;
  try {
    (void)build_principal(initial, block, tol, 0.0);
  } catch (const GeometryError& e) {
    thrown = true;
    CHECK(!e.cell().empty());
  }
  CHECK(thrown);

  // cube spheres of the unit cubes: exact circumspheres of the grid cubes
  CubeSphere cs = cube_sphere(full, CubeId{{0, 0, 0}, 1, 2, 3}, tol);
  CHECK((cs.center - vec3(0.5, 0.5, 0.5)).norm() < 1e-10);
  CHECK(cs.sq_radius == doctest::Approx(0.75).epsilon(1e-10));

  // the circle of a grid face is its circumcircle: its plane contains the
  // lifted points of the circumscribed square, while the axis point itself
  // sits at chart infinity
  FaceId f12{{0, 0, 0}, 1, 2};
  std::vector<ProjPoint> corner_lifts;
  for (const VertexId& v : vertices_of_face(f12))
    corner_lifts.push_back(full.lift.net.vertex.values.at(v));
  ProjSubspace circle_plane = join(corner_lifts, tol);
  const double r = std::sqrt(0.5);
  for (double t : {0.3, 1.7, 4.1}) {
    Vec p = vec3(0.5 + r * std::cos(t), 0.5 + r * std::sin(t), 0.0);
    CHECK(circle_plane.contains_residual(full.chart.lift_point(p)) < 1e-8);
  }
  CHECK_THROWS_AS((void)face_circle_axis(full, f12, tol), GeometryError);
}

TEST_CASE("keeping either half of a principal pair extends to the same "
          "verdict") {
  Tolerances tol;
  Block block{{2, 2, 2}};
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    ConjugateBinet full = random_principal_binet(seed, block, tol);
    VertexNet g = full.vertex;
    VertexNet h = restrict_face_net(full.face, 1, 2);

    Report clean = symmetric_extension_check(g, h, 1, 2, tol);
    CHECK(clean.pass);
    for (const std::string& w : clean.warnings)
      CHECK(w.find("fail") == std::string::npos);

    VertexNet hbad = h;
    VertexId victim{{1, 1, 0}};
    hbad.values.at(victim) = nudge(hbad.values.at(victim), 1e-2);
    Report broken = symmetric_extension_check(g, hbad, 1, 2, tol);
    CHECK(broken.pass);  // both sides reject, so the verdicts still agree
    for (const std::string& w : broken.warnings)
      CHECK(w.find("fail") != std::string::npos);
  }
}

TEST_CASE("two-dimensional extensions add nothing and agree") {
  Tolerances tol;
  Block block{{3, 3}};
  ConjugateBinet base = random_principal_binet(7, block, tol);
  VertexNet g = base.vertex;
  VertexNet h = restrict_face_net(base.face, 1, 2);

  FaceNet ext = extend_face_net(h, 1, 2, 2, tol);
  for (const auto& [f, p] : ext.values) {
    CHECK(f.di == 1);
    CHECK(f.dj == 2);
    CHECK(point_distance(p, h.values.at(identify_face(f))) == 0.0);
  }

  CHECK(symmetric_extension_check(g, h, 1, 2, tol).pass);

  VertexNet hbad = h;
  hbad.values.at(VertexId{{1, 1}}) =
      nudge(hbad.values.at(VertexId{{1, 1}}), 1e-2);
  Report broken = symmetric_extension_check(g, hbad, 1, 2, tol);
  CHECK(broken.pass);
  for (const std::string& w : broken.warnings)
    CHECK(w.find("fail") != std::string::npos);
}

TEST_CASE("orthogonality checks refuse points at chart infinity") {
  Tolerances tol;
  Block block{{2, 2}};
  ConjugateBinet base = random_principal_binet(11, block, tol);
  Vec far(4);
  far << 0.0, 1.0, 0.2, -0.4;
  base.face.values.at(FaceId{{0, 0}, 1, 2}) = ProjPoint(far);
  bool thrown = false;
  try {
    (void)check_principal(base, tol);
  } catch (const GeometryError& e) {
    thrown = true;
    CHECK(e.code() == ErrorCode::InfinitePoint);
  }
  CHECK(thrown);
}

TEST_CASE("lift generation is limited to three coordinate directions") {
  Tolerances tol;
  Rng rng(5);
  Block block{{1, 1, 1, 1}};
  CHECK_THROWS_AS((void)generate_polar_lift(block, 3, rng, tol),
                  GeometryError);
}
