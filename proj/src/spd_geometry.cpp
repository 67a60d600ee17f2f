#include "conal/spd_geometry.hpp"

#include <cmath>
#include <sstream>

namespace conal {

namespace {

void check_same_dim(const SpdPoint& a, const SpdPoint& b, const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch " << a.dim() << " vs " << b.dim();
    throw ValidationError(msg.str());
  }
}

// Pull end back to the identity through start^(-1/2): the symmetric matrix
// whose spectrum equals that of start^-1 end.
SymMatrix whitened(const SpdPoint& start, const SpdPoint& end) {
  const Matrix w = sym_invsqrt(start).mat();
  Matrix m = w * end.mat() * w;
  return SymMatrix(0.5 * (m + m.transpose()));
}

}  // namespace

SpdPoint congruence(const Matrix& a, const SpdPoint& sigma) {
  if (a.rows() != a.cols() || a.rows() != sigma.dim()) {
    throw ValidationError("congruence: transform must be square and match the point");
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || smax / smin > 1e12) {
    throw ValidationError("congruence: transform is singular or too ill-conditioned");
  }
  Matrix m = a * sigma.mat() * a.transpose();
  return SpdPoint(0.5 * (m + m.transpose()));
}

double ai_distance(const SpdPoint& sigma1, const SpdPoint& sigma2) {
  check_same_dim(sigma1, sigma2, "ai_distance");
  const EigenPair ep = sym_eig(whitened(sigma1, sigma2));
  double sum = 0.0;
  for (int i = 0; i < ep.values.size(); ++i) {
    const double l = std::log(ep.values[i]);
    sum += l * l;
  }
  return std::sqrt(sum);
}

GeodesicSegment geodesic(const SpdPoint& start, const SpdPoint& end) {
  check_same_dim(start, end, "geodesic");
  return GeodesicSegment{start, end, sym_fn(whitened(start, end), SymFn::Log)};
}

GeodesicSegment geodesic_shoot(const SpdPoint& start, const SymMatrix& velocity) {
  if (start.dim() != velocity.dim()) {
    throw ValidationError("geodesic_shoot: dimension mismatch");
  }
  const Matrix w = sym_invsqrt(start).mat();
  const Matrix s = sym_sqrt(start).mat();
  const SymMatrix lambda(0.5 * (w * velocity.mat() * w +
                                (w * velocity.mat() * w).transpose()));
  const Matrix e = sym_fn(lambda, SymFn::Exp).mat();
  Matrix end = s * e * s;
  return GeodesicSegment{start, SpdPoint(0.5 * (end + end.transpose())), lambda};
}

SpdPoint geodesic_point(const GeodesicSegment& seg, double t) {
  const Matrix s = sym_sqrt(seg.start).mat();
  const Matrix e = sym_fn(SymMatrix(t * seg.log_velocity.mat()), SymFn::Exp).mat();
  Matrix p = s * e * s;
  return SpdPoint(0.5 * (p + p.transpose()));
}

SymMatrix geodesic_velocity(const GeodesicSegment& seg, double t) {
  const Matrix s = sym_sqrt(seg.start).mat();
  const Matrix lam = seg.log_velocity.mat();
  const Matrix e = sym_fn(SymMatrix(t * lam), SymFn::Exp).mat();
  // Lambda and exp(t Lambda) commute, so the product is symmetric.
  Matrix v = s * (lam * e) * s;
  return SymMatrix(0.5 * (v + v.transpose()));
}

}  // namespace conal
