#include "binet/projective.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace binet {

namespace {

// Singular values sorted descending; returns the number kept under the
// relative cutoff and records the decision.  `scale_floor` guards matrices
// whose natural scale is known a priori (projector stacks have scale 1): if
// the largest singular value falls below it, the matrix is pure noise and the
// cutoff must not shrink along with it.
int decide_rank(const Eigen::VectorXd& sv, double rel_tol, RankAudit* audit,
                const std::string& op, double scale_floor = 0.0) {
  double smax = sv.size() ? sv(0) : 0.0;
  if (smax == 0.0) {
    if (audit) audit->record(op, 0, 0.0, 0.0, 0.0, 0.0);
    return 0;
  }
  double thr = rel_tol * std::max(smax, scale_floor);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > thr) ++rank;
  if (audit) {
    double smin_kept = rank > 0 ? sv(rank - 1) : 0.0;
    double smax_dropped = rank < sv.size() ? sv(rank) : 0.0;
    audit->record(op, rank, smax, smin_kept, smax_dropped, thr);
  }
  return rank;
}

void check_same_ambient(int a, int b, const std::string& op) {
  if (a != b)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        op + " on ambients RP^" + std::to_string(a - 1) +
                            " and RP^" + std::to_string(b - 1));
}

}  // namespace

// ---------------------------------------------------------------------------
// RankAudit
// ---------------------------------------------------------------------------

void RankAudit::record(const std::string& op, int rank, double smax,
                       double smin_kept, double smax_dropped,
                       double threshold) {
  // Marginal: a kept singular value within x10 of the cutoff, or a dropped
  // one within /10 of it. These decisions are correct but fragile.
  bool marginal = false;
  if (threshold > 0.0) {
    if (smin_kept > 0.0 && smin_kept < 10.0 * threshold) marginal = true;
    if (smax_dropped > 0.1 * threshold) marginal = true;
  }
  events.push_back({op, rank, smax, smin_kept, smax_dropped, marginal});
  any_marginal = any_marginal || marginal;
}

void RankAudit::to_warnings(Report& report) const {
  for (const auto& e : events) {
    if (!e.marginal) continue;
    std::ostringstream os;
    os << "marginal rank decision in " << e.op << ": kept " << e.rank
       << ", sigma_min_kept=" << e.sigma_min_kept
       << ", sigma_max_dropped=" << e.sigma_max_dropped
       << ", sigma_max=" << e.sigma_max;
    report.warn(os.str());
  }
}

// ---------------------------------------------------------------------------
// ProjPoint
// ---------------------------------------------------------------------------

ProjPoint::ProjPoint(Vec h) : h_(std::move(h)) {
  double norm = h_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("homogeneous vector must be nonzero and finite");
  h_ /= norm;
  int imax = 0;
  double amax = -1.0;
  for (int i = 0; i < h_.size(); ++i) {
    double a = std::abs(h_[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (h_[imax] < 0.0) h_ = -h_;
}

ProjPoint ProjPoint::from_affine(const Vec& y) {
  Vec h(y.size() + 1);
  h[0] = 1.0;
  h.tail(y.size()) = y;
  return ProjPoint(h);
}

Vec ProjPoint::affine(double tol) const {
  if (std::abs(h_[0]) <= tol)
    throw GeometryError(ErrorCode::InfinitePoint,
                        "point lies on the hyperplane at infinity");
  return h_.tail(h_.size() - 1) / h_[0];
}

double point_distance(const ProjPoint& a, const ProjPoint& b) {
  check_same_ambient(int(a.h().size()), int(b.h().size()), "point_distance");
  return std::min((a.h() - b.h()).norm(), (a.h() + b.h()).norm());
}

// ---------------------------------------------------------------------------
// ProjSubspace
// ---------------------------------------------------------------------------

ProjSubspace ProjSubspace::empty(int pdim) {
  ProjSubspace s;
  s.ambient_ = pdim + 1;
  s.basis_ = Mat(pdim + 1, 0);
  return s;
}

ProjSubspace ProjSubspace::full(int pdim) {
  ProjSubspace s;
  s.ambient_ = pdim + 1;
  s.basis_ = Mat::Identity(pdim + 1, pdim + 1);
  return s;
}

ProjSubspace ProjSubspace::of_point(const ProjPoint& p) {
  ProjSubspace s;
  s.ambient_ = int(p.h().size());
  s.basis_ = p.h();
  return s;
}

ProjSubspace ProjSubspace::span_of(const Mat& columns, const Tolerances& tol,
                                   RankAudit* audit, const std::string& op) {
  ProjSubspace s;
  s.ambient_ = int(columns.rows());
  if (columns.cols() == 0) {
    s.basis_ = Mat(columns.rows(), 0);
    return s;
  }
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  int rank = decide_rank(svd.singularValues(), tol.rank, audit, op);
  s.basis_ = svd.matrixU().leftCols(rank);
  return s;
}

double ProjSubspace::contains_residual(const ProjPoint& p) const {
  check_same_ambient(ambient_, int(p.h().size()), "contains");
  if (basis_.cols() == 0) return 1.0;
  return (p.h() - basis_ * (basis_.transpose() * p.h())).norm();
}

double ProjSubspace::contains_residual(const ProjSubspace& b) const {
  check_same_ambient(ambient_, b.ambient_, "contains");
  double worst = 0.0;
  for (int c = 0; c < b.basis_.cols(); ++c) {
    Vec v = b.basis_.col(c);
    worst = std::max(worst, (v - basis_ * (basis_.transpose() * v)).norm());
  }
  return worst;
}

ProjPoint ProjSubspace::as_point() const {
  if (dim() != 0)
    throw GeometryError(ErrorCode::NonGenericMeet,
                        "subspace of dimension " + std::to_string(dim()) +
                            " is not a point");
  return ProjPoint(basis_.col(0));
}

ProjSubspace join(const std::vector<ProjSubspace>& parts, const Tolerances& tol,
                  RankAudit* audit) {
  if (parts.empty()) throw std::invalid_argument("join of nothing");
  int ambient = parts[0].ambient_;
  int cols = 0;
  for (const auto& p : parts) {
    check_same_ambient(ambient, p.ambient_, "join");
    cols += int(p.basis_.cols());
  }
  Mat stacked(ambient, cols);
  int at = 0;
  for (const auto& p : parts) {
    stacked.middleCols(at, p.basis_.cols()) = p.basis_;
    at += int(p.basis_.cols());
  }
  return ProjSubspace::span_of(stacked, tol, audit, "join");
}

ProjSubspace join(const std::vector<ProjPoint>& points, const Tolerances& tol,
                  RankAudit* audit) {
  std::vector<ProjSubspace> parts;
  parts.reserve(points.size());
  for (const auto& p : points) parts.push_back(ProjSubspace::of_point(p));
  return join(parts, tol, audit);
}

ProjSubspace meet(const std::vector<ProjSubspace>& parts, const Tolerances& tol,
                  RankAudit* audit) {
  if (parts.empty()) throw std::invalid_argument("meet of nothing");
  int ambient = parts[0].ambient_;
  for (const auto& p : parts) check_same_ambient(ambient, p.ambient_, "meet");
  // x lies in every part iff every complement projector annihilates it.
  Mat stacked(ambient * int(parts.size()), ambient);
  for (size_t k = 0; k < parts.size(); ++k) {
    const Mat& b = parts[k].basis_;
    stacked.middleRows(int(k) * ambient, ambient) =
        Mat::Identity(ambient, ambient) - b * b.transpose();
  }
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  int rank = decide_rank(svd.singularValues(), tol.rank, audit, "meet", 1.0);
  ProjSubspace s;
  s.ambient_ = ambient;
  s.basis_ = svd.matrixV().rightCols(ambient - rank);
  return s;
}

ProjSubspace meet(const ProjSubspace& a, const ProjSubspace& b,
                  const Tolerances& tol, RankAudit* audit) {
  return meet(std::vector<ProjSubspace>{a, b}, tol, audit);
}

ProjSubspace complement(const ProjSubspace& s, const Tolerances& tol,
                        RankAudit* audit) {
  int ambient = s.ambient_;
  if (s.basis_.cols() == 0) return ProjSubspace::full(ambient - 1);
  Eigen::JacobiSVD<Mat> svd(Mat(s.basis_.transpose()), Eigen::ComputeFullV);
  int rank = decide_rank(svd.singularValues(), tol.rank, audit, "complement");
  ProjSubspace c;
  c.ambient_ = ambient;
  c.basis_ = svd.matrixV().rightCols(ambient - rank);
  return c;
}

double subspace_distance(const ProjSubspace& a, const ProjSubspace& b) {
  const Mat& ba = a.basis();
  const Mat& bb = b.basis();
  Mat pa = ba * ba.transpose();
  Mat pb = bb * bb.transpose();
  return (pa - pb).norm();
}

// ---------------------------------------------------------------------------
// Quadric
// ---------------------------------------------------------------------------

Quadric::Quadric(Mat q, const Tolerances& tol) : q_(std::move(q)) {
  if (q_.rows() != q_.cols())
    throw std::invalid_argument("quadric matrix must be square");
  double asym = (q_ - q_.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, q_.norm()))
    throw std::invalid_argument("quadric matrix must be symmetric");
  q_ = 0.5 * (q_ + q_.transpose());
  Eigen::JacobiSVD<Mat> svd(q_);
  const auto& sv = svd.singularValues();
  qnorm_ = sv(0);
  if (!(qnorm_ > 0.0) || sv(sv.size() - 1) <= tol.rank * qnorm_)
    throw GeometryError(ErrorCode::DegenerateQuadric,
                        "quadric matrix is singular within tolerance");
}

double Quadric::pairing(const ProjPoint& a, const ProjPoint& b) const {
  check_same_ambient(int(q_.rows()), int(a.h().size()), "pairing");
  check_same_ambient(int(q_.rows()), int(b.h().size()), "pairing");
  return a.h().dot(q_ * b.h()) / qnorm_;
}

double Quadric::on_quadric_residual(const ProjPoint& p) const {
  return std::abs(pairing(p, p));
}

ProjSubspace Quadric::polar(const ProjSubspace& s, const Tolerances& tol,
                            RankAudit* audit) const {
  check_same_ambient(int(q_.rows()), s.pdim() + 1, "polar");
  if (s.is_empty()) return ProjSubspace::full(s.pdim());
  ProjSubspace qs = ProjSubspace::span_of(q_ * s.basis(), tol, audit, "polar");
  return complement(qs, tol, audit);
}

ProjSubspace Quadric::polar(const ProjPoint& p, const Tolerances& tol,
                            RankAudit* audit) const {
  return polar(ProjSubspace::of_point(p), tol, audit);
}

// ---------------------------------------------------------------------------
// MoebiusChart
// ---------------------------------------------------------------------------

MoebiusChart::MoebiusChart(int n) : n_(n) {
  Mat m = Mat::Identity(n + 2, n + 2);
  m(0, 0) = -1.0;
  m_ = Quadric(std::move(m));
  Vec b = Vec::Zero(n + 2);
  b[0] = 1.0;
  b[n + 1] = 1.0;
  b_ = ProjPoint(b);
  target_ = ProjSubspace::span_of(Mat::Identity(n + 2, n + 1), Tolerances{});
}

ProjPoint MoebiusChart::lift_sphere(const SphereRep& s) const {
  if (int(s.center.size()) != n_)
    throw GeometryError(ErrorCode::AmbientMismatch,
                        "sphere center has wrong dimension");
  double g = s.center.squaredNorm() - s.sq_radius;
  Vec h(n_ + 2);
  h[0] = 0.5 * (g + 1.0);
  h.segment(1, n_) = s.center;
  h[n_ + 1] = 0.5 * (g - 1.0);
  return ProjPoint(h);
}

ProjPoint MoebiusChart::lift_point(const Vec& y) const {
  return lift_sphere({y, 0.0});
}

SphereRep MoebiusChart::sphere_of(const ProjPoint& s, double tol) const {
  check_same_ambient(n_ + 2, int(s.h().size()), "sphere_of");
  const Vec& h = s.h();
  double denom = h[0] - h[n_ + 1];
  if (std::abs(denom) <= tol) {
    if (point_distance(s, b_) <= tol)
      throw GeometryError(ErrorCode::CenterFiber,
                          "projection center is not a sphere");
    throw GeometryError(ErrorCode::InfinitePoint,
                        "element has center at infinity");
  }
  SphereRep rep;
  rep.center = h.segment(1, n_) / denom;
  double g = (h[0] + h[n_ + 1]) / denom;
  rep.sq_radius = rep.center.squaredNorm() - g;
  return rep;
}

ProjPoint MoebiusChart::project_hom(const ProjPoint& s) const {
  check_same_ambient(n_ + 2, int(s.h().size()), "project");
  const Vec& h = s.h();
  Vec chart(n_ + 1);
  chart[0] = h[0] - h[n_ + 1];
  chart.tail(n_) = h.segment(1, n_);
  if (chart.norm() <= 1e-14)
    throw GeometryError(ErrorCode::CenterFiber,
                        "cannot project the projection center");
  return ProjPoint(chart);
}

Vec MoebiusChart::project_affine(const ProjPoint& s, double tol) const {
  return project_hom(s).affine(tol);
}

ProjPoint MoebiusChart::embed(const ProjPoint& x) const {
  check_same_ambient(n_ + 1, int(x.h().size()), "embed");
  Vec h = Vec::Zero(n_ + 2);
  h.head(n_ + 1) = x.h();
  return ProjPoint(h);
}

ProjSubspace MoebiusChart::embed_subspace(const ProjSubspace& s,
                                          const Tolerances& tol) const {
  check_same_ambient(n_ + 1, s.pdim() + 1, "embed");
  Mat cols = Mat::Zero(n_ + 2, s.basis().cols());
  cols.topRows(n_ + 1) = s.basis();
  return ProjSubspace::span_of(cols, tol, nullptr, "embed");
}

ProjSubspace MoebiusChart::fiber_line(const ProjPoint& x, const Tolerances& tol,
                                      RankAudit* audit) const {
  return join(std::vector<ProjPoint>{embed(x), b_}, tol, audit);
}

ProjPoint MoebiusChart::lift_through(const ProjPoint& x,
                                     const ProjPoint& adjacent,
                                     const Tolerances& tol,
                                     RankAudit* audit) const {
  ProjSubspace fiber = fiber_line(x, tol, audit);
  ProjSubspace hyper = m_.polar(adjacent, tol, audit);
  ProjSubspace hit = meet(fiber, hyper, tol, audit);
  if (hit.dim() != 0)
    throw GeometryError(ErrorCode::NonGenericMeet,
                        "fiber does not meet the polar hyperplane in a point");
  return hit.as_point();
}

ProjSubspace MoebiusChart::project_subspace(const ProjSubspace& s,
                                            const Tolerances& tol,
                                            RankAudit* audit) const {
  check_same_ambient(n_ + 2, s.pdim() + 1, "project");
  ProjSubspace cone = join({s, ProjSubspace::of_point(b_)}, tol, audit);
  ProjSubspace cut = meet(cone, target_, tol, audit);
  // Target vectors have last coordinate 0; rewrite them in chart coordinates.
  Mat cols = cut.basis().topRows(n_ + 1);
  return ProjSubspace::span_of(cols, tol, audit, "project_chart");
}

ProjSubspace MoebiusChart::lift_subspace_through(const ProjSubspace& s,
                                                 const ProjPoint& lifted,
                                                 const Tolerances& tol,
                                                 RankAudit* audit) const {
  ProjSubspace cone =
      join({embed_subspace(s, tol), ProjSubspace::of_point(b_)}, tol, audit);
  ProjSubspace hyper = m_.polar(lifted, tol, audit);
  ProjSubspace hit = meet(cone, hyper, tol, audit);
  if (hit.dim() != s.dim())
    throw GeometryError(ErrorCode::NonGenericMeet,
                        "lifted subspace has unexpected dimension " +
                            std::to_string(hit.dim()));
  return hit;
}

}  // namespace binet
