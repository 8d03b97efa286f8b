#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <string>
#include <vector>

#include "binet/error.hpp"
#include "binet/report.hpp"
#include "binet/tolerance.hpp"

namespace binet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Rank auditing.  Every rank decision taken by the kernel can be recorded
// here; decisions landing within a factor 10 of the cutoff are flagged as
// marginal so that downstream reports can surface them as warnings.
// ---------------------------------------------------------------------------
struct RankAudit {
  struct Event {
    std::string op;
    int rank;                 // number of singular values kept
    double sigma_max;
    double sigma_min_kept;    // 0 if nothing kept
    double sigma_max_dropped; // 0 if nothing dropped
    bool marginal;
  };
  std::vector<Event> events;
  bool any_marginal = false;

  void record(const std::string& op, int rank, double smax, double smin_kept,
              double smax_dropped, double threshold);
  void to_warnings(Report& report) const;
};

// ---------------------------------------------------------------------------
// Points of RP^d, stored as canonicalized homogeneous vectors: unit Euclidean
// norm, first coordinate of largest magnitude positive.  The homogenizing
// coordinate is the first one, so the affine point y corresponds to (1; y).
// ---------------------------------------------------------------------------
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(Vec h);

  static ProjPoint from_affine(const Vec& y);

  const Vec& h() const { return h_; }
  int pdim() const { return int(h_.size()) - 1; }

  bool is_infinite(double tol) const { return std::abs(h_[0]) <= tol; }
  // Affine coordinates (h1..hd)/h0; throws InfinitePoint near the hyperplane
  // at infinity of the chart.
  Vec affine(double tol = 1e-12) const;

 private:
  Vec h_;
};

// Chordal distance min(|a-b|, |a+b|) between canonicalized representatives.
double point_distance(const ProjPoint& a, const ProjPoint& b);

// ---------------------------------------------------------------------------
// Projective subspaces of RP^d, stored as an orthonormal basis of the
// corresponding linear subspace of R^{d+1}.  dim() is the projective
// dimension: -1 empty, 0 point, 1 line, ...
// ---------------------------------------------------------------------------
class ProjSubspace {
 public:
  ProjSubspace() = default;

  static ProjSubspace empty(int pdim);
  static ProjSubspace full(int pdim);
  static ProjSubspace of_point(const ProjPoint& p);
  // Span of arbitrary columns; rank decided by SVD relative to tolerances.
  static ProjSubspace span_of(const Mat& columns, const Tolerances& tol,
                              RankAudit* audit = nullptr,
                              const std::string& op = "span");

  int pdim() const { return ambient_ - 1; }
  int dim() const { return int(basis_.cols()) - 1; }
  bool is_empty() const { return basis_.cols() == 0; }
  const Mat& basis() const { return basis_; }

  // ||(I - P)x|| for the unit representative of p.
  double contains_residual(const ProjPoint& p) const;
  // max over columns of b of ||(I - P)col||; 0 if b is empty.
  double contains_residual(const ProjSubspace& b) const;
  ProjPoint as_point() const;  // requires dim() == 0

 private:
  Mat basis_;        // (ambient_) x (dim+1), orthonormal columns
  int ambient_ = 0;  // d+1

  friend ProjSubspace join(const std::vector<ProjSubspace>& parts,
                           const Tolerances& tol, RankAudit* audit);
  friend ProjSubspace meet(const std::vector<ProjSubspace>& parts,
                           const Tolerances& tol, RankAudit* audit);
  friend ProjSubspace complement(const ProjSubspace& s, const Tolerances& tol,
                                 RankAudit* audit);
};

ProjSubspace join(const std::vector<ProjSubspace>& parts, const Tolerances& tol,
                  RankAudit* audit = nullptr);
ProjSubspace join(const std::vector<ProjPoint>& points, const Tolerances& tol,
                  RankAudit* audit = nullptr);
ProjSubspace meet(const std::vector<ProjSubspace>& parts, const Tolerances& tol,
                  RankAudit* audit = nullptr);
ProjSubspace meet(const ProjSubspace& a, const ProjSubspace& b,
                  const Tolerances& tol, RankAudit* audit = nullptr);
// Orthogonal complement subspace (basis of the Euclidean complement).
ProjSubspace complement(const ProjSubspace& s, const Tolerances& tol,
                        RankAudit* audit = nullptr);

// Frobenius distance between orthogonal projectors; 0 iff equal subspaces.
double subspace_distance(const ProjSubspace& a, const ProjSubspace& b);

// ---------------------------------------------------------------------------
// Nondegenerate quadrics, given by a symmetric matrix Q up to scale.
// ---------------------------------------------------------------------------
class Quadric {
 public:
  Quadric() = default;
  explicit Quadric(Mat q, const Tolerances& tol = {});

  const Mat& q() const { return q_; }
  int pdim() const { return int(q_.rows()) - 1; }
  double norm() const { return qnorm_; }

  // Signed bilinear pairing of canonical representatives, divided by the
  // spectral norm of Q: dimensionless, in [-1, 1].
  double pairing(const ProjPoint& a, const ProjPoint& b) const;
  // |pairing(p, p)|: 0 iff p lies on the quadric.
  double on_quadric_residual(const ProjPoint& p) const;

  // Polar subspace: the projective complement of Q * s with respect to the
  // ambient space; dim(s) + dim(polar(s)) = d - 1.
  ProjSubspace polar(const ProjSubspace& s, const Tolerances& tol,
                     RankAudit* audit = nullptr) const;
  ProjSubspace polar(const ProjPoint& p, const Tolerances& tol,
                     RankAudit* audit = nullptr) const;

 private:
  Mat q_;
  double qnorm_ = 1.0;  // spectral norm of q_
};

// ---------------------------------------------------------------------------
// Spheres of R^n with real center and real squared radius (possibly negative
// or zero; zero means a point sphere).
// ---------------------------------------------------------------------------
struct SphereRep {
  Vec center;
  double sq_radius = 0.0;
};

// ---------------------------------------------------------------------------
// The Moebius lift chart.  Ambient for lifts is RP^{n+1} with coordinates
// (x_0, x_1..x_n, x_{n+1}); the absolute quadric is M = diag(-1, 1, ..., 1),
// the projection center is B = (1, 0, ..., 0, 1), and the target is the
// hyperplane {x_{n+1} = 0}, whose chart drops the last coordinate and
// dehomogenizes by x_0.  A sphere with center c and squared radius r2 lifts to
//   S(c, r2) = ((|c|^2 - r2 + 1)/2 ; c ; (|c|^2 - r2 - 1)/2),
// which lies on M exactly when r2 = 0 (point spheres, the lift of points);
// two spheres pair to zero in M exactly when |c1 - c2|^2 = r2_1 + r2_2.
// ---------------------------------------------------------------------------
class MoebiusChart {
 public:
  explicit MoebiusChart(int n);

  int n() const { return n_; }
  const Quadric& quadric() const { return m_; }
  const ProjPoint& center() const { return b_; }          // B
  const ProjSubspace& target() const { return target_; }  // {x_{n+1} = 0}

  ProjPoint lift_sphere(const SphereRep& s) const;
  ProjPoint lift_point(const Vec& y) const;  // = lift_sphere({y, 0})
  // Inverse of lift_sphere; throws InfinitePoint for hyperplane-type elements
  // (x_0 = x_{n+1}, center at infinity) and CenterFiber for B itself.
  SphereRep sphere_of(const ProjPoint& s, double tol = 1e-12) const;

  // Central projection from B onto the target, in homogeneous chart
  // coordinates of RP^n: (x_0 - x_{n+1} ; x_1..x_n).  Total except at B.
  ProjPoint project_hom(const ProjPoint& s) const;
  Vec project_affine(const ProjPoint& s, double tol = 1e-12) const;

  // Embedding of the chart: point of RP^n -> point of the target in RP^{n+1}.
  ProjPoint embed(const ProjPoint& x) const;
  ProjSubspace embed_subspace(const ProjSubspace& s, const Tolerances& tol) const;

  // Fiber over a chart point: the line embed(x) v B, i.e. everything that
  // projects to x.  Meets the absolute quadric in the two lifts of x.
  ProjSubspace fiber_line(const ProjPoint& x, const Tolerances& tol,
                          RankAudit* audit = nullptr) const;

  // Unique lift of `x` whose polar hyperplane contains `adjacent`:
  // fiber_line(x) ∩ polar(adjacent).  This is the propagation step of the
  // Moebius lift.  A sphere's polar hyperplane never contains B, so the meet
  // is a single point -- except when `adjacent` is a hyperplane-type element
  // through x itself (a point on a plane is orthogonal to it at every
  // radius); then the whole fiber lies in the polar and NonGenericMeet is
  // thrown.
  ProjPoint lift_through(const ProjPoint& x, const ProjPoint& adjacent,
                         const Tolerances& tol, RankAudit* audit = nullptr) const;

  // Central image of a subspace: (s v B) ∩ target, given in RP^n chart
  // coordinates.
  ProjSubspace project_subspace(const ProjSubspace& s, const Tolerances& tol,
                                RankAudit* audit = nullptr) const;

  // Lift of a subspace through a known lifted point: (embed(s) v B) ∩
  // polar(lifted).  Used to transport plane fields into the lift.
  ProjSubspace lift_subspace_through(const ProjSubspace& s,
                                     const ProjPoint& lifted,
                                     const Tolerances& tol,
                                     RankAudit* audit = nullptr) const;

 private:
  int n_;
  Quadric m_;
  ProjPoint b_;
  ProjSubspace target_;
};

}  // namespace binet
