#include <algorithm>
#include <cmath>
#include <cstdint>

#include "binet/ocs.hpp"
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

ConjugateBinet random_principal_binet(std::uint64_t seed, const Block& block,
                                      const Tolerances& tol) {
  Rng rng(seed);
  PolarBinet full = generate_polar_lift(block, 3, rng, tol);
  return project_polar_binet(full, MoebiusChart(3), tol);
}

ConjugateBinet translate_binet(const ConjugateBinet& b, const Vec& t) {
  Mat h = Mat::Identity(4, 4);
  h.block(1, 0, 3, 1) = t;
  ConjugateBinet out;
  out.vertex.pdim = 3;
  out.face.pdim = 3;
  for (const auto& [v, p] : b.vertex.values)
    out.vertex.values.emplace(v, ProjPoint(h * p.h()));
  for (const auto& [f, p] : b.face.values)
    out.face.values.emplace(f, ProjPoint(h * p.h()));
  return out;
}

// The seed faces of the reconstruction: three initial rows of 12-faces.
std::vector<FaceId> seed_rows(const Block& block) {
  std::vector<FaceId> rows;
  for (int i = 0; i < block.sides[0]; ++i)
    rows.push_back(FaceId{{i, 0, 1}, 1, 2});
  for (int j = 1; j < block.sides[1]; ++j)
    rows.push_back(FaceId{{0, j, 1}, 1, 2});
  for (int k = 2; k < block.sides[2]; ++k)
    rows.push_back(FaceId{{0, 0, k}, 1, 2});
  return rows;
}

// Unit-hypercube grid whose sphere lift is affine in the lattice coordinates:
// centers B*v and squared radii |B*v|^2 + w.v.  Affine lifts keep all quads
// planar and all cube spans three-dimensional exactly, so the derived system
// is consistent to machine precision.
Ocs exact_grid_ocs(int N, const std::vector<Vec>& cols, const Vec& w) {
  Tolerances tol;
  MoebiusChart chart(3);
  Block hyper{Coord(N, 1)};
  auto center = [&](const Coord& at) {
    Vec c = Vec::Zero(3);
    for (int a = 0; a < N; ++a) c += double(at[a]) * cols[a];
    return c;
  };
  auto sq_radius = [&](const Coord& at) {
    double s = center(at).squaredNorm();
    for (int a = 0; a < N; ++a) s += w[a] * double(at[a]);
    return s;
  };
  std::map<VertexId, ProjPoint> lifts;
  for (const VertexId& v : block_vertices(hyper))
    lifts.emplace(v, chart.lift_sphere({center(v.at), sq_radius(v.at)}));
  Ocs out;
  for (const VertexId& v : block_vertices(hyper))
    if (coord_sum(v.at) <= 3) out.vertex.emplace(v, center(v.at));
  for (int d1 = 1; d1 <= N; ++d1)
    for (int d2 = d1 + 1; d2 <= N; ++d2)
      for (int d3 = d2 + 1; d3 <= N; ++d3) {
        CubeId c{Coord(N, 0), d1, d2, d3};
        std::vector<ProjPoint> corners;
        for (const VertexId& vv : vertices_of_cube(c))
          corners.push_back(lifts.at(vv));
        ProjSubspace span = join(corners, tol);
        REQUIRE(span.dim() == 3);
        out.cube.emplace(c, chart.project_affine(
                                chart.quadric().polar(span, tol).as_point()));
      }
  return out;
}

// Initial data for the consistency drive from a random conjugate net in the
// lift space: propagate the hypercube, project vertices, derive the
// origin-based cube values as projected poles.  Rescaled to a unit-size box
// (a similarity) so the drive's absolute squared-length residuals stay at
// floating point scale.
Ocs lift_generated_ocs(std::uint64_t seed, int N, const Tolerances& tol) {
  Rng rng(seed);
  Block hyper{Coord(N, 1)};
  VertexNet g = generate_conjugate_initial(hyper, 4, rng);
  VertexNet full = propagate_vertex_net(g, hyper, tol);
  MoebiusChart chart(3);
  Ocs out;
  for (const VertexId& v : block_vertices(hyper))
    if (coord_sum(v.at) <= 3)
      out.vertex.emplace(v, chart.project_affine(full.values.at(v)));
  for (int d1 = 1; d1 <= N; ++d1)
    for (int d2 = d1 + 1; d2 <= N; ++d2)
      for (int d3 = d2 + 1; d3 <= N; ++d3) {
        CubeId c{Coord(N, 0), d1, d2, d3};
        std::vector<ProjPoint> corners;
        for (const VertexId& vv : vertices_of_cube(c))
          corners.push_back(full.values.at(vv));
        ProjSubspace span = join(corners, tol);
        REQUIRE(span.dim() == 3);
        out.cube.emplace(c, chart.project_affine(
                                chart.quadric().polar(span, tol).as_point()));
      }
  double scale = 1.0;
  for (const auto& [v, p] : out.vertex)
    scale = std::max(scale, p.cwiseAbs().maxCoeff());
  for (const auto& [c, p] : out.cube)
    scale = std::max(scale, p.cwiseAbs().maxCoeff());
  for (auto& [v, p] : out.vertex) p /= scale;
  for (auto& [c, p] : out.cube) p /= scale;
  return out;
}

}  // namespace

TEST_CASE("the integer grid with cube centers is orthogonal and a nudged cube point is caught") {
  Tolerances tol;
  Ocs x;
  Block block{{2, 2, 2}};
  for (const VertexId& v : block_vertices(block))
    x.vertex.emplace(v, vec3(v.at[0], v.at[1], v.at[2]));
  for (const CubeId& c : block_cubes(block))
    x.cube.emplace(c, vec3(c.base[0] + 0.5, c.base[1] + 0.5, c.base[2] + 0.5));

  Report rep = check_ocs(x, tol);
  CHECK(rep.pass);
  CHECK(rep.max_residual() == 0.0);
  // 12 interior faces, each flanked by exactly one cube pair
  CHECK(rep.records.size() == 12);

  Ocs bad = x;
  bad.cube.at(CubeId{{0, 0, 0}, 1, 2, 3}) += vec3(0.1, 0.0, 0.0);
  Report rejected = check_ocs(bad, tol);
  CHECK(!rejected.pass);
  REQUIRE(rejected.first_failure() != nullptr);
  CHECK(!rejected.first_failure()->cell.empty());
  CHECK(rejected.first_failure()->cell.find("c(0,0,0)") != std::string::npos);
}

TEST_CASE("data without any flanked face warns instead of failing") {
  Tolerances tol;
  Ocs x;
  x.vertex.emplace(VertexId{{0, 0, 0}}, vec3(0, 0, 0));
  x.vertex.emplace(VertexId{{1, 0, 0}}, vec3(1, 0, 0));
  x.cube.emplace(CubeId{{0, 0, 0}, 1, 2, 3}, vec3(0.5, 0.5, 0.5));
  Report rep = check_ocs(x, tol);
  CHECK(rep.pass);
  CHECK(!rep.warnings.empty());
  CHECK(rep.records.empty());
}

TEST_CASE("face axes of a principal binet concur at the cube points, independent of the lift") {
  Tolerances tol;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    CAPTURE(seed);
    ConjugateBinet p = random_principal_binet(seed, Block{{2, 2, 2}}, tol);

    Report axes;
    Ocs x = binet_to_ocs(p, tol, &axes);
    CHECK(axes.pass);
    CHECK(axes.max_residual() < 1e-8);
    CHECK(x.cube.size() == 8);
    CHECK(x.vertex.size() == 27);

    Report rep = check_ocs(x, tol);
    CHECK(rep.pass);
    CHECK(rep.max_residual() < 1e-8);

    Ocs through_a = binet_to_ocs_via_lift(p, 0.7, tol);
    Ocs through_b = binet_to_ocs_via_lift(p, -0.4, tol);
    for (const auto& [c, pt] : x.cube) {
      CHECK((through_a.cube.at(c) - through_b.cube.at(c)).norm() < 1e-10);
      CHECK((through_a.cube.at(c) - pt).norm() < 1e-8);
    }
  }
}

TEST_CASE("a perturbed face value breaks the axis concurrency") {
  Tolerances tol;
  ConjugateBinet p = random_principal_binet(17, Block{{1, 1, 1}}, tol);
  FaceId victim{{0, 0, 0}, 1, 2};
  Vec y = p.face.values.at(victim).affine();
  y[0] += 1e-2;
  p.face.values.at(victim) = ProjPoint::from_affine(y);
  try {
    (void)binet_to_ocs(p, tol);
    FAIL("concurrency violation went unnoticed");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::NonGenericMeet);
    CHECK(e.cell() == cell_label(CubeId{{0, 0, 0}, 1, 2, 3}));
  }
}

TEST_CASE("translating a binet translates its orthogonal system") {
  Tolerances tol;
  ConjugateBinet p = random_principal_binet(19, Block{{2, 2, 2}}, tol);
  Vec t = vec3(0.3, -1.2, 0.8);
  Ocs x = binet_to_ocs(p, tol);
  Ocs xt = binet_to_ocs(translate_binet(p, t), tol);
  for (const auto& [v, pt] : x.vertex)
    CHECK((xt.vertex.at(v) - pt - t).norm() < 1e-9);
  for (const auto& [c, pt] : x.cube)
    CHECK((xt.cube.at(c) - pt - t).norm() < 1e-9);
}

TEST_CASE("a cube whose lift sphere is centered at the origin gets the origin as its point") {
  Tolerances tol;
  ConjugateBinet p = random_principal_binet(23, Block{{1, 1, 1}}, tol);
  MoebiusLift ml = moebius_lift(p, 0.8, VertexId{{0, 0, 0}}, tol);
  CubeSphere cs = cube_sphere(ml, CubeId{{0, 0, 0}, 1, 2, 3}, tol);
  ConjugateBinet centered = translate_binet(p, -cs.center);
  Ocs x = binet_to_ocs(centered, tol);
  CHECK(x.cube.at(CubeId{{0, 0, 0}, 1, 2, 3}).norm() < 1e-8);
}

TEST_CASE("cube poles of a lift are polar to the corners and project onto the system") {
  Tolerances tol;
  ConjugateBinet p = random_principal_binet(29, Block{{2, 2, 2}}, tol);
  Ocs x = binet_to_ocs(p, tol);
  MoebiusLift ml = moebius_lift(p, 0.5, VertexId{{0, 0, 0}}, tol);

  OcsLift lift = ocs_lift_of(ml, tol);
  CHECK(lift.cube.size() == 8);
  Report rep = check_ocs_lift(lift, tol);
  CHECK(rep.pass);
  CHECK(rep.max_residual() < 1e-10);

  Ocs projected = project_ocs_lift(lift, tol);
  for (const auto& [v, pt] : p.vertex.values)
    CHECK((projected.vertex.at(v) - pt.affine()).norm() < 1e-10);
  for (const auto& [c, pt] : x.cube)
    CHECK((projected.cube.at(c) - pt).norm() < 1e-8);
}

TEST_CASE("seeded reconstruction inverts the cube construction on the core block") {
  Tolerances tol;
  Block block{{4, 4, 4}};
  ConjugateBinet p = random_principal_binet(31, block, tol);
  Ocs x = binet_to_ocs(p, tol);
  CHECK(x.cube.size() == 64);

  std::map<FaceId, ProjPoint> seeds;
  for (const FaceId& f : seed_rows(block))
    seeds.emplace(f, p.face.values.at(f));
  REQUIRE(seeds.size() == 9);

  ConjugateBinet q = ocs_to_binet(x, seeds, block, tol);
  CHECK(check_principal(q, tol).pass);

  // the core block carries vertices [1,3]^3 and all faces between them
  CHECK(q.vertex.values.size() == 27);
  for (const auto& [v, pt] : q.vertex.values)
    CHECK(point_distance(pt, p.vertex.values.at(v)) < 1e-7);
  CHECK(!q.face.values.empty());
  for (const auto& [f, pt] : q.face.values)
    CHECK(point_distance(pt, p.face.values.at(f)) < 1e-7);

  // mapping the reconstruction forward again reproduces the cube points
  Ocs x2 = binet_to_ocs(q, tol);
  CHECK(x2.cube.size() == 8);
  for (const auto& [c, pt] : x2.cube)
    CHECK((x.cube.at(c) - pt).norm() < 1e-7);
}

TEST_CASE("different seeds on the same system give different binets with the same cubes") {
  Tolerances tol;
  Block block{{4, 4, 4}};
  ConjugateBinet p = random_principal_binet(37, block, tol);
  Ocs x = binet_to_ocs(p, tol);

  std::map<FaceId, ProjPoint> own, moved;
  Rng rng(101);
  for (const FaceId& f : seed_rows(block)) {
    own.emplace(f, p.face.values.at(f));
    Vec below = x.cube.at(CubeId{{f.base[0], f.base[1], f.base[2] - 1}, 1, 2, 3});
    Vec above = x.cube.at(CubeId{{f.base[0], f.base[1], f.base[2]}, 1, 2, 3});
    double t = 0.25 + 0.5 * rng.uniform();
    moved.emplace(f, ProjPoint::from_affine(below + t * (above - below)));
  }

  ConjugateBinet q1 = ocs_to_binet(x, own, block, tol);
  ConjugateBinet q2 = ocs_to_binet(x, moved, block, tol);
  CHECK(check_principal(q1, tol).pass);
  CHECK(check_principal(q2, tol).pass);

  double separation = 0.0;
  for (const auto& [f, pt] : q1.face.values)
    separation = std::max(separation, point_distance(pt, q2.face.values.at(f)));
  CHECK(separation > 1e-3);

  Ocs back1 = binet_to_ocs(q1, tol);
  Ocs back2 = binet_to_ocs(q2, tol);
  for (const auto& [c, pt] : back1.cube) {
    CHECK((x.cube.at(c) - pt).norm() < 1e-7);
    CHECK((x.cube.at(c) - back2.cube.at(c)).norm() < 1e-7);
  }
}

TEST_CASE("seed validation rejects off-line and ill-formed seed sets") {
  Tolerances tol;
  Block block{{3, 3, 3}};
  ConjugateBinet p = random_principal_binet(41, block, tol);
  Ocs x = binet_to_ocs(p, tol);
  std::map<FaceId, ProjPoint> seeds;
  for (const FaceId& f : seed_rows(block))
    seeds.emplace(f, p.face.values.at(f));

  SUBCASE("a seed nudged off its constraint line") {
    FaceId victim{{1, 0, 1}, 1, 2};
    Vec below = x.cube.at(CubeId{{1, 0, 0}, 1, 2, 3});
    Vec above = x.cube.at(CubeId{{1, 0, 1}, 1, 2, 3});
    Vec axis = (above - below).normalized();
    Vec off = vec3(1, 0, 0) - vec3(1, 0, 0).dot(axis) * axis;
    if (off.norm() < 0.5) off = vec3(0, 1, 0) - vec3(0, 1, 0).dot(axis) * axis;
    Vec y = seeds.at(victim).affine() + 1e-3 * off.normalized();
    seeds.at(victim) = ProjPoint::from_affine(y);
    try {
      (void)ocs_to_binet(x, seeds, block, tol);
      FAIL("off-line seed went unnoticed");
    } catch (const GeometryError& e) {
      CHECK(e.code() == ErrorCode::SeedOffLine);
      CHECK(e.cell() == cell_label(victim));
    }
  }

  SUBCASE("a missing seed row entry") {
    seeds.erase(FaceId{{0, 1, 1}, 1, 2});
    CHECK_THROWS_AS((void)ocs_to_binet(x, seeds, block, tol), GeometryError);
  }

  SUBCASE("a renamed seed key") {
    auto node = seeds.extract(FaceId{{0, 1, 1}, 1, 2});
    node.key() = FaceId{{1, 1, 1}, 1, 2};
    seeds.insert(std::move(node));
    try {
      (void)ocs_to_binet(x, seeds, block, tol);
      FAIL("stray seed key went unnoticed");
    } catch (const GeometryError& e) {
      CHECK(e.code() == ErrorCode::WrongLayer);
    }
  }

  SUBCASE("blocks too small or with missing cube values") {
    CHECK_THROWS_AS((void)ocs_to_binet(x, seeds, Block{{2, 3, 3}}, tol),
                    GeometryError);
    Ocs incomplete = x;
    incomplete.cube.erase(CubeId{{1, 1, 1}, 1, 2, 3});
    try {
      (void)ocs_to_binet(incomplete, seeds, block, tol);
      FAIL("missing cube value went unnoticed");
    } catch (const GeometryError& e) {
      CHECK(e.code() == ErrorCode::WrongLayer);
      CHECK(e.cell() == cell_label(CubeId{{1, 1, 1}, 1, 2, 3}));
    }
  }
}

TEST_CASE("conversion guards reject data outside Z^3 or RP^3") {
  Tolerances tol;
  ConjugateBinet flat;
  flat.vertex.pdim = 3;
  flat.face.pdim = 3;
  flat.vertex.values.emplace(VertexId{{0, 0}}, ProjPoint::from_affine(vec3(0, 0, 0)));
  CHECK_THROWS_AS((void)binet_to_ocs(flat, tol), GeometryError);

  ConjugateBinet wrong_space;
  wrong_space.vertex.pdim = 4;
  wrong_space.face.pdim = 4;
  Vec y(4);
  y << 0, 0, 0, 0;
  wrong_space.vertex.values.emplace(VertexId{{0, 0, 0}},
                                    ProjPoint::from_affine(y));
  try {
    (void)binet_to_ocs(wrong_space, tol);
    FAIL("ambient mismatch went unnoticed");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::AmbientMismatch);
  }
}

TEST_CASE("four-direction consistency holds exactly for affine sphere data") {
  Tolerances tol;
  std::vector<Vec> cols = {vec3(1, 0, 0), vec3(0, 1, 0), vec3(0, 0, 1),
                           vec3(0.4, 0.3, -0.2), vec3(-0.1, 0.5, 0.3)};
  Vec w(5);
  w << 0.7, 1.3, -0.5, 0.9, 0.4;

  Ocs four = exact_grid_ocs(4, cols, w);
  Report rep = check_ocs_consistency(four, 4, tol);
  CHECK(rep.pass);
  CHECK(rep.max_residual() < 1e-10);
  bool saw_paths = false, saw_polarity = false;
  for (const auto& r : rep.records) {
    saw_paths = saw_paths || r.quantity == "path_independence";
    saw_polarity = saw_polarity || r.quantity == "lift_polarity";
  }
  CHECK(saw_paths);
  CHECK(saw_polarity);

  Ocs five = exact_grid_ocs(5, cols, w);
  Report rep5 = check_ocs_consistency(five, 5, tol);
  CHECK(rep5.pass);
  CHECK(rep5.max_residual() < 1e-10);
}

TEST_CASE("four-direction consistency holds for lift-generated data and fails for broken polarity") {
  Tolerances tol;
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    CAPTURE(seed);
    Ocs initial = lift_generated_ocs(seed, 4, tol);
    Report rep = check_ocs_consistency(initial, 4, tol);
    CHECK(rep.pass);
    CHECK(rep.max_residual() < 1e-7);
  }

  Ocs broken = lift_generated_ocs(21, 4, tol);
  broken.cube.begin()->second += vec3(1e-2, 0, 0);
  Report cube_rep;
  CHECK_NOTHROW(cube_rep = check_ocs_consistency(broken, 4, tol));
  CHECK(!cube_rep.pass);
  REQUIRE(cube_rep.first_failure() != nullptr);
  CHECK(!cube_rep.first_failure()->cell.empty());

  Ocs skewed = lift_generated_ocs(22, 4, tol);
  skewed.vertex.at(VertexId{{1, 1, 0, 0}}) += vec3(1e-2, 0, 0);
  Report vertex_rep;
  CHECK_NOTHROW(vertex_rep = check_ocs_consistency(skewed, 4, tol));
  CHECK(!vertex_rep.pass);
}

TEST_CASE("consistency drive rejects missing or misdimensioned input") {
  Tolerances tol;
  std::vector<Vec> cols = {vec3(1, 0, 0), vec3(0, 1, 0), vec3(0, 0, 1),
                           vec3(0.4, 0.3, -0.2)};
  Vec w(4);
  w << 0.7, 1.3, -0.5, 0.9;
  Ocs four = exact_grid_ocs(4, cols, w);

  CHECK_THROWS_AS((void)check_ocs_consistency(four, 3, tol), GeometryError);

  Ocs missing_vertex = four;
  missing_vertex.vertex.erase(VertexId{{1, 1, 0, 0}});
  try {
    (void)check_ocs_consistency(missing_vertex, 4, tol);
    FAIL("missing vertex went unnoticed");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::WrongLayer);
    CHECK(e.cell() == cell_label(VertexId{{1, 1, 0, 0}}));
  }

  Ocs missing_cube = four;
  missing_cube.cube.erase(CubeId{{0, 0, 0, 0}, 1, 2, 4});
  CHECK_THROWS_AS((void)check_ocs_consistency(missing_cube, 4, tol),
                  GeometryError);
}
