#include "binet/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "binet/error.hpp"

namespace binet {
namespace {

void validate_point(const SmoothSystem& s, const Vec& u) {
  if (!s.value)
    throw GeometryError(ErrorCode::WrongLayer, "system has no value closure");
  if (u.size() != 3)
    throw GeometryError(ErrorCode::WrongLayer,
                        "evaluation point must lie in R^3");
}

double checked_step(const FDConfig& fd) {
  if (!(fd.h >= 1e-6 && fd.h <= 1e-2))
    throw GeometryError(ErrorCode::SchemaError,
                        "finite-difference step outside [1e-6, 1e-2]");
  return fd.h;
}

Vec shifted(const Vec& u, int dir, double delta) {
  Vec v = u;
  v[dir - 1] += delta;
  return v;
}

std::string fmt_u(const Vec& u) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%.4g,%.4g,%.4g)", u[0], u[1], u[2]);
  return buf;
}

// Floor below which a coefficient counts as vanishing, relative to the
// magnitude of the whole table.
double coefficient_floor(const ConjugateCoefficients& co) {
  return 1e-8 * (1.0 + co.a.cwiseAbs().maxCoeff());
}

int third_direction(int i, int j) { return 6 - i - j; }

}  // namespace

Vec tangent(const SmoothSystem& s, const Vec& u, int i) {
  validate_point(s, u);
  if (s.derivative) return s.derivative(u, i);
  double h = checked_step(s.fd);
  return (s.value(shifted(u, i, h)) - s.value(shifted(u, i, -h))) / (2.0 * h);
}

Vec mixed_partial(const SmoothSystem& s, const Vec& u, int i, int j) {
  validate_point(s, u);
  if (s.mixed) return s.mixed(u, i, j);
  double h = checked_step(s.fd);
  if (s.derivative)
    return (s.derivative(shifted(u, j, h), i) -
            s.derivative(shifted(u, j, -h), i)) /
           (2.0 * h);
  Vec pp = s.value(shifted(shifted(u, i, h), j, h));
  Vec pm = s.value(shifted(shifted(u, i, h), j, -h));
  Vec mp = s.value(shifted(shifted(u, i, -h), j, h));
  Vec mm = s.value(shifted(shifted(u, i, -h), j, -h));
  return (pp - pm - mp + mm) / (4.0 * h * h);
}

ConjugateCoefficients coefficients_at(const SmoothSystem& s, const Vec& u,
                                      const Tolerances& tol) {
  validate_point(s, u);
  std::array<Vec, 3> t;
  for (int i = 1; i <= 3; ++i) t[i - 1] = tangent(s, u, i);

  ConjugateCoefficients co;
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      const Vec& ti = t[i - 1];
      const Vec& tj = t[j - 1];
      double ni = ti.norm(), nj = tj.norm();
      Eigen::Vector3d cross = Eigen::Vector3d(ti).cross(Eigen::Vector3d(tj));
      if (ni < 1e-14 || nj < 1e-14 || cross.norm() <= 1e-9 * ni * nj)
        throw GeometryError(
            ErrorCode::DegenerateAxes,
            "tangent directions " + std::to_string(i) + " and " +
                std::to_string(j) + " do not span a plane",
            fmt_u(u));
      Vec m = mixed_partial(s, u, i, j);
      Mat basis(3, 2);
      basis.col(0) = ti;
      basis.col(1) = tj;
      Eigen::JacobiSVD<Mat> svd(basis,
                                Eigen::ComputeThinU | Eigen::ComputeThinV);
      Vec sol = svd.solve(m);
      double scale = std::max({ni, nj, m.norm()});
      double rel = scale > 0.0 ? (m - basis * sol).norm() / scale : 0.0;
      if (rel > tol.span)
        throw GeometryError(ErrorCode::NotConjugate,
                            "mixed derivative d" + std::to_string(i) + "d" +
                                std::to_string(j) +
                                " leaves the tangent span",
                            fmt_u(u));
      co.a(i - 1, j - 1) = sol(0);
      co.a(j - 1, i - 1) = sol(1);
      co.span_residual = std::max(co.span_residual, rel);
    }
  return co;
}

Eigen::Vector3d compatibility_residual(const SmoothSystem& s, const Vec& u,
                                       const Tolerances& tol) {
  validate_point(s, u);
  double h = checked_step(s.fd);
  ConjugateCoefficients base = coefficients_at(s, u, tol);
  std::array<ConjugateCoefficients, 3> plus, minus;
  for (int m = 1; m <= 3; ++m) {
    plus[m - 1] = coefficients_at(s, shifted(u, m, h), tol);
    minus[m - 1] = coefficients_at(s, shifted(u, m, -h), tol);
  }
  auto d = [&](int m, int i, int j) {
    return (plus[m - 1].at(i, j) - minus[m - 1].at(i, j)) / (2.0 * h);
  };

  Eigen::Vector3d res;
  for (int i = 1; i <= 3; ++i) {
    int j = i == 1 ? 2 : 1;
    int k = i == 3 ? 2 : 3;
    double rhs = base.at(i, j) * base.at(j, k) +
                 base.at(k, j) * base.at(i, k) -
                 base.at(i, j) * base.at(i, k);
    res(i - 1) = std::max(std::abs(d(k, i, j) - rhs),
                          std::abs(d(j, i, k) - rhs));
  }
  return res;
}

LaplacePoint laplace_transform(const SmoothSystem& s, const Vec& u, int i,
                               int j, const Tolerances& tol) {
  ConjugateCoefficients co = coefficients_at(s, u, tol);
  double floor = coefficient_floor(co);
  double aji = co.at(j, i);
  if (std::abs(aji) <= floor)
    throw GeometryError(ErrorCode::VanishingCoefficient,
                        "focal coefficient a_" + std::to_string(j) +
                            std::to_string(i) +
                            " vanishes; focal point at infinity",
                        fmt_u(u));
  LaplacePoint out;
  out.i = i;
  out.j = j;
  out.L = s.value(u) - tangent(s, u, i) / aji;
  int k = third_direction(i, j);
  out.degenerate_pair = std::abs(co.at(k, i) - aji) <= floor;
  return out;
}

Vec focal_drift_closed_form(const SmoothSystem& s, const Vec& u,
                            const Tolerances& tol) {
  ConjugateCoefficients co = coefficients_at(s, u, tol);
  double floor = coefficient_floor(co);
  double a31 = co.at(3, 1);
  if (std::abs(a31) <= floor)
    throw GeometryError(ErrorCode::VanishingCoefficient,
                        "focal coefficient a_31 vanishes", fmt_u(u));
  double a21 = co.at(2, 1);
  double a32 = co.at(3, 2);
  return ((a21 - a31) / a31) *
         ((a32 / a31) * tangent(s, u, 1) - tangent(s, u, 2));
}

Report check_focal_orthogonality(const SmoothSystem& s, const Vec& u,
                                 const Tolerances& tol,
                                 double condition_tol) {
  validate_point(s, u);
  Report rep;
  const std::string at = "@" + fmt_u(u);
  std::array<Vec, 3> t;
  std::array<double, 3> n;
  for (int i = 1; i <= 3; ++i) {
    t[i - 1] = tangent(s, u, i);
    n[i - 1] = t[i - 1].norm();
    if (n[i - 1] < 1e-14)
      throw GeometryError(ErrorCode::DegenerateAxes,
                          "tangent direction " + std::to_string(i) +
                              " vanishes",
                          fmt_u(u));
  }
  auto cosine = [&](int i, int j) {
    return std::abs(t[i - 1].dot(t[j - 1])) / (n[i - 1] * n[j - 1]);
  };
  double c12 = cosine(1, 2);
  rep.add("d1~d2" + at, "cross_condition", c12, condition_tol);

  // Second cross condition: the focal point L_13 drifts along u_2
  // orthogonally to the third tangent.  The drift is measured by central
  // differences of the focal point itself.
  bool condition2_known = true, condition2_pass = false;
  double h = checked_step(s.fd);
  try {
    LaplacePoint here = laplace_transform(s, u, 1, 3, tol);
    if (here.degenerate_pair)
      rep.warn("focal pair degenerate at " + fmt_u(u) +
               ": a_21 matches a_31");
    Vec drift = (laplace_transform(s, shifted(u, 2, h), 1, 3, tol).L -
                 laplace_transform(s, shifted(u, 2, -h), 1, 3, tol).L) /
                (2.0 * h);
    double nd = drift.norm();
    double scale = std::max({n[0], n[1], n[2]});
    double cL = nd <= 1e-10 * scale
                    ? 0.0
                    : std::abs(drift.dot(t[2])) / (nd * n[2]);
    if (nd <= 1e-10 * scale)
      rep.warn("focal drift vanishes at " + fmt_u(u) +
               "; condition holds trivially");
    rep.add("d2L13~d3" + at, "cross_condition", cL, condition_tol);
    condition2_pass = cL <= condition_tol;
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::VanishingCoefficient) throw;
    rep.warn(std::string("focal point degenerate: ") + e.what());
    rep.add("d2L13~d3" + at, "cross_condition", 1.0, 0.0);
    condition2_known = false;
  }

  double c13 = cosine(1, 3), c23 = cosine(2, 3);
  rep.add("d1~d3" + at, "tangent_cosine", c13, condition_tol);
  rep.add("d2~d3" + at, "tangent_cosine", c23, condition_tol);

  // The equivalence can be asserted whenever its condition side is decided:
  // either both conditions were evaluated, or the first one already fails
  // and settles the conjunction on its own.
  if (condition2_known || c12 > condition_tol) {
    bool conditions = c12 <= condition_tol && condition2_pass;
    bool orthogonal =
        c12 <= condition_tol && c13 <= condition_tol && c23 <= condition_tol;
    rep.add("agreement" + at, "verdict_agreement",
            conditions == orthogonal ? 0.0 : 1.0, 0.0);
  } else {
    rep.warn("equivalence not asserted at " + fmt_u(u) +
             ": focal hypotheses unmet");
  }
  return rep;
}

DiscreteSample sample_discrete(const SmoothSystem& s, const Block& block,
                               const Vec& origin, double eps,
                               const Tolerances& tol) {
  validate_point(s, origin);
  if (block.N() != 3)
    throw GeometryError(ErrorCode::WrongLayer,
                        "sampling runs on three-dimensional blocks");
  if (!(eps > 0.0))
    throw GeometryError(ErrorCode::SchemaError,
                        "sample step must be positive");

  DiscreteSample out;
  out.binet.vertex.pdim = 3;
  out.binet.face.pdim = 3;

  auto param = [&](const Coord& base, double si, double sj, double sk) {
    Vec u = origin;
    u[0] += eps * (base[0] + si);
    u[1] += eps * (base[1] + sj);
    u[2] += eps * (base[2] + sk);
    return u;
  };

  for (const VertexId& v : block_vertices(block))
    out.binet.vertex.values.emplace(
        v, ProjPoint::from_affine(s.value(param(v.at, 0, 0, 0))));

  // Face values: 12-faces sample the system at the parameter midpoint; the
  // other families sample the focal point whose tangent lines the face's
  // cross conditions discretize.
  for (const FaceId& f : block_faces(block)) {
    Vec u = param(f.base, (f.di == 1 || f.dj == 1) ? 0.5 : 0.0,
                  (f.di == 2 || f.dj == 2) ? 0.5 : 0.0,
                  (f.di == 3 || f.dj == 3) ? 0.5 : 0.0);
    if (f.di == 1 && f.dj == 2) {
      out.binet.face.values.emplace(f, ProjPoint::from_affine(s.value(u)));
      continue;
    }
    int li = f.di == 1 ? 2 : 1;  // L_23 on 13-faces, L_13 on 23-faces
    try {
      out.binet.face.values.emplace(
          f, ProjPoint::from_affine(laplace_transform(s, u, li, 3, tol).L));
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::VanishingCoefficient) throw;
      Vec dir = tangent(s, u, li);
      Vec h(4);
      h << 0.0, dir / dir.norm();
      out.binet.face.values.emplace(f, ProjPoint(h));
      ++out.focal_at_infinity;
    }
  }
  out.binet.face.planes = derive_planes_from_faces(out.binet.face, tol);
  if (out.focal_at_infinity > 0)
    out.defects.warn(std::to_string(out.focal_at_infinity) +
                     " focal points at infinity; emitted as directions");

  // Planarity of the vertex quads, relative to quad extent.
  double quad = 0.0;
  for (const FaceId& f : block_faces(block)) {
    Mat pts(4, 3);
    int r = 0;
    for (const VertexId& v : vertices_of_face(f))
      pts.row(r++) = out.binet.vertex.values.at(v).affine().transpose();
    Mat centered = pts.rowwise() - pts.colwise().mean();
    Eigen::JacobiSVD<Mat> svd(centered);
    if (svd.singularValues()(0) > 1e-14)
      quad = std::max(quad,
                      svd.singularValues()(2) / svd.singularValues()(0));
  }
  out.defects.add("vertex_quads", "quad_planarity", quad, 1.0);

  // Planarity of the face stars: all face values around a vertex share a
  // plane.  Measured on homogeneous coordinates so infinite focal points
  // participate.
  double star = 0.0;
  for (const VertexId& v : block_vertices(block)) {
    std::vector<const ProjPoint*> ring;
    for (const FaceId& f : faces_of_vertex(v, 3)) {
      auto it = out.binet.face.values.find(f);
      if (it != out.binet.face.values.end()) ring.push_back(&it->second);
    }
    if (ring.size() < 4) continue;
    Mat hs(int(ring.size()), 4);
    for (int r = 0; r < int(ring.size()); ++r)
      hs.row(r) = ring[r]->h().transpose() / ring[r]->h().norm();
    Eigen::JacobiSVD<Mat> svd(hs);
    star = std::max(star,
                    svd.singularValues()(3) / svd.singularValues()(0));
  }
  out.defects.add("face_stars", "star_planarity", star, 1.0);

  // Edge crosses: each edge against the differences of its flanking face
  // values, the discrete version of the two cross conditions.
  double worst_cross = 0.0;
  int skipped = 0;
  for (const EdgeId& e : block_edges(block)) {
    auto [v0, v1] = vertices_of_edge(e);
    auto i0 = out.binet.vertex.values.find(v0);
    auto i1 = out.binet.vertex.values.find(v1);
    if (i0 == out.binet.vertex.values.end() ||
        i1 == out.binet.vertex.values.end())
      continue;
    Vec edge_dir = i1->second.affine() - i0->second.affine();
    double elen = edge_dir.norm();
    if (elen < 1e-14) continue;
    std::vector<Vec> flank;
    for (const FaceId& f : faces_of_edge(e, 3)) {
      auto it = out.binet.face.values.find(f);
      if (it == out.binet.face.values.end()) continue;
      if (it->second.is_infinite(1e-12)) {
        ++skipped;
        continue;
      }
      flank.push_back(it->second.affine());
    }
    for (std::size_t a = 0; a + 1 < flank.size(); ++a)
      for (std::size_t b = a + 1; b < flank.size(); ++b) {
        Vec d = flank[b] - flank[a];
        double dn = d.norm();
        if (dn < 1e-14) continue;
        worst_cross =
            std::max(worst_cross, std::abs(edge_dir.dot(d)) / (elen * dn));
      }
  }
  out.defects.add("edge_crosses", "cross_cosine", worst_cross, 1.0);
  if (skipped > 0)
    out.defects.warn("crosses with " + std::to_string(skipped) +
                     " infinite face values skipped");
  return out;
}

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

SmoothSystem spherical_system() {
  SmoothSystem s;
  s.value = [](const Vec& u) {
    double th = u[0], r = u[1], ph = u[2];
    return vec3(r * std::sin(th) * std::cos(ph),
                r * std::sin(th) * std::sin(ph), r * std::cos(th));
  };
  s.derivative = [](const Vec& u, int i) {
    double th = u[0], r = u[1], ph = u[2];
    switch (i) {
      case 1:
        return vec3(r * std::cos(th) * std::cos(ph),
                    r * std::cos(th) * std::sin(ph), -r * std::sin(th));
      case 2:
        return vec3(std::sin(th) * std::cos(ph),
                    std::sin(th) * std::sin(ph), std::cos(th));
      default:
        return vec3(-r * std::sin(th) * std::sin(ph),
                    r * std::sin(th) * std::cos(ph), 0.0);
    }
  };
  s.mixed = [](const Vec& u, int i, int j) {
    double th = u[0], r = u[1], ph = u[2];
    if (i > j) std::swap(i, j);
    if (i == 1 && j == 1)
      return vec3(-r * std::sin(th) * std::cos(ph),
                  -r * std::sin(th) * std::sin(ph), -r * std::cos(th));
    if (i == 1 && j == 2)
      return vec3(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph),
                  -std::sin(th));
    if (i == 1 && j == 3)
      return vec3(-r * std::cos(th) * std::sin(ph),
                  r * std::cos(th) * std::cos(ph), 0.0);
    if (i == 2 && j == 2) return vec3(0.0, 0.0, 0.0);
    if (i == 2 && j == 3)
      return vec3(-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph),
                  0.0);
    return vec3(-r * std::sin(th) * std::cos(ph),
                -r * std::sin(th) * std::sin(ph), 0.0);
  };
  return s;
}

// The same sphere parametrization with the radius listed first; relabeling
// makes a_21 = a_31 = 1/r, the degenerate focal configuration.
SmoothSystem spherical_radius_first() {
  SmoothSystem inner = spherical_system();
  auto swap_u = [](const Vec& u) { return vec3(u[1], u[0], u[2]); };
  auto swap_dir = [](int i) { return i == 1 ? 2 : (i == 2 ? 1 : 3); };
  SmoothSystem s;
  s.value = [inner, swap_u](const Vec& u) { return inner.value(swap_u(u)); };
  s.derivative = [inner, swap_u, swap_dir](const Vec& u, int i) {
    return inner.derivative(swap_u(u), swap_dir(i));
  };
  s.mixed = [inner, swap_u, swap_dir](const Vec& u, int i, int j) {
    return inner.mixed(swap_u(u), swap_dir(i), swap_dir(j));
  };
  return s;
}

SmoothSystem parabolic_system() {
  SmoothSystem s;
  s.value = [](const Vec& u) {
    double sg = u[0], ta = u[1], ph = u[2];
    return vec3(sg * ta * std::cos(ph), sg * ta * std::sin(ph),
                (ta * ta - sg * sg) / 2.0);
  };
  s.derivative = [](const Vec& u, int i) {
    double sg = u[0], ta = u[1], ph = u[2];
    switch (i) {
      case 1:
        return vec3(ta * std::cos(ph), ta * std::sin(ph), -sg);
      case 2:
        return vec3(sg * std::cos(ph), sg * std::sin(ph), ta);
      default:
        return vec3(-sg * ta * std::sin(ph), sg * ta * std::cos(ph), 0.0);
    }
  };
  s.mixed = [](const Vec& u, int i, int j) {
    double sg = u[0], ta = u[1], ph = u[2];
    if (i > j) std::swap(i, j);
    if (i == 1 && j == 1) return vec3(0.0, 0.0, -1.0);
    if (i == 1 && j == 2) return vec3(std::cos(ph), std::sin(ph), 0.0);
    if (i == 1 && j == 3)
      return vec3(-ta * std::sin(ph), ta * std::cos(ph), 0.0);
    if (i == 2 && j == 2) return vec3(0.0, 0.0, 1.0);
    if (i == 2 && j == 3)
      return vec3(-sg * std::sin(ph), sg * std::cos(ph), 0.0);
    return vec3(-sg * ta * std::cos(ph), -sg * ta * std::sin(ph), 0.0);
  };
  return s;
}

SmoothSystem affine_system(const Eigen::Matrix3d& a, const Vec& b) {
  SmoothSystem s;
  s.value = [a, b](const Vec& u) { return Vec(a * u + b); };
  s.derivative = [a](const Vec&, int i) { return Vec(a.col(i - 1)); };
  s.mixed = [](const Vec&, int, int) { return Vec(Vec::Zero(3)); };
  return s;
}

}  // namespace

SmoothSystem builtin_system(const std::string& name) {
  if (name == "spherical") return spherical_system();
  if (name == "spherical-rtf") return spherical_radius_first();
  if (name == "parabolic") return parabolic_system();
  if (name == "affine") {
    Eigen::Matrix3d a;
    a << 2.0, 0.5, 0.0, 0.3, 1.5, 0.2, 0.1, -0.4, 1.1;
    return affine_system(a, vec3(0.2, -0.3, 0.5));
  }
  if (name == "shear") {
    Eigen::Matrix3d a;
    a << 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0;
    return affine_system(a, Vec(Vec::Zero(3)));
  }
  if (name == "cartesian")
    return affine_system(Eigen::Matrix3d::Identity(), Vec(Vec::Zero(3)));
  throw GeometryError(ErrorCode::SchemaError,
                      "unknown smooth system \"" + name + "\"");
}

SmoothSystem random_orthogonal_system(Rng& rng) {
  // Random rotation via a uniform axis and angle, random positive scales.
  double z = rng.uniform(-1.0, 1.0);
  double az = rng.uniform(0.0, 2.0 * M_PI);
  double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
  Eigen::Vector3d axis(rxy * std::cos(az), rxy * std::sin(az), z);
  Eigen::Matrix3d rot =
      Eigen::AngleAxisd(rng.uniform(0.0, 2.0 * M_PI), axis).toRotationMatrix();
  Eigen::Vector3d scales(rng.uniform(0.6, 1.8), rng.uniform(0.6, 1.8),
                         rng.uniform(0.6, 1.8));
  Eigen::Matrix3d a = rot * scales.asDiagonal();
  Eigen::Vector3d b(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                    rng.uniform(-0.5, 0.5));

  // Inversion center pushed well away from the image of the unit
  // neighbourhood around u = (1,1,1), where callers evaluate.
  double cz = rng.uniform(-1.0, 1.0);
  double caz = rng.uniform(0.0, 2.0 * M_PI);
  double crxy = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  Eigen::Vector3d dir(crxy * std::cos(caz), crxy * std::sin(caz), cz);
  Eigen::Vector3d center = a * Eigen::Vector3d(1.0, 1.0, 1.0) + b + 4.0 * dir;
  double r2 = rng.uniform(1.0, 4.0);

  SmoothSystem s;
  auto w_of = [a, b, center](const Vec& u) {
    return Eigen::Vector3d(a * u + b - center);
  };
  s.value = [w_of, center, r2](const Vec& u) {
    Eigen::Vector3d w = w_of(u);
    return Vec(center + r2 * w / w.squaredNorm());
  };
  s.derivative = [w_of, a, r2](const Vec& u, int i) {
    Eigen::Vector3d w = w_of(u);
    double rho = w.squaredNorm();
    Eigen::Vector3d ai = a.col(i - 1);
    return Vec(r2 * (ai / rho - 2.0 * w.dot(ai) * w / (rho * rho)));
  };
  s.mixed = [w_of, a, r2](const Vec& u, int i, int j) {
    Eigen::Vector3d w = w_of(u);
    double rho = w.squaredNorm();
    Eigen::Vector3d ai = a.col(i - 1), aj = a.col(j - 1);
    double wi = w.dot(ai), wj = w.dot(aj);
    return Vec(r2 * (-2.0 * wi * aj / (rho * rho) -
                     2.0 * wj * ai / (rho * rho) -
                     2.0 * ai.dot(aj) * w / (rho * rho) +
                     8.0 * wi * wj * w / (rho * rho * rho)));
  };
  return s;
}

SmoothSystem linear_image(const SmoothSystem& s, const Eigen::Matrix3d& m) {
  SmoothSystem out;
  out.fd = s.fd;
  if (s.value) {
    auto inner = s.value;
    out.value = [inner, m](const Vec& u) { return Vec(m * inner(u)); };
  }
  if (s.derivative) {
    auto inner = s.derivative;
    out.derivative = [inner, m](const Vec& u, int i) {
      return Vec(m * inner(u, i));
    };
  }
  if (s.mixed) {
    auto inner = s.mixed;
    out.mixed = [inner, m](const Vec& u, int i, int j) {
      return Vec(m * inner(u, i, j));
    };
  }
  return out;
}

}  // namespace binet
