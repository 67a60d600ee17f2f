#include "conal/cone_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conal/sampling.hpp"

namespace conal {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

SymMatrix whiten(const SpdPoint& sigma, const SymMatrix& x) {
  if (sigma.dim() != x.dim()) {
    throw ValidationError("cone margin: point and direction dimensions differ");
  }
  const Matrix w = sym_invsqrt(sigma).mat();
  Matrix y = w * x.mat() * w;
  return SymMatrix(0.5 * (y + y.transpose()));
}

}  // namespace

ConeSpec ConeSpec::quadratic(double mu, int n) {
  if (n < 1) throw ValidationError("quadratic cone: dimension must be >= 1");
  if (!(mu > 0.0 && mu < static_cast<double>(n))) {
    std::ostringstream msg;
    msg << "quadratic cone: mu must lie in (0, n) = (0, " << n << "), got " << mu;
    throw ValidationError(msg.str());
  }
  ConeSpec spec;
  spec.kind_ = ConeKind::Quadratic;
  spec.n_ = n;
  spec.mu_ = mu;
  return spec;
}

ConeSpec ConeSpec::loewner(int n) {
  if (n < 1) throw ValidationError("loewner cone: dimension must be >= 1");
  ConeSpec spec;
  spec.kind_ = ConeKind::Loewner;
  spec.n_ = n;
  return spec;
}

ConeSpec ConeSpec::rankk(const SymMatrix& p) {
  const EigenPair ep = sym_eig(p);
  const double scale = std::max(1.0, ep.values.cwiseAbs().maxCoeff());
  int positive = 0;
  for (int i = 0; i < ep.values.size(); ++i) {
    if (std::abs(ep.values[i]) <= 1e-10 * scale) {
      std::ostringstream msg;
      msg << "rank-k cone: P is degenerate, eigenvalue " << ep.values[i]
          << " is within tolerance of zero";
      throw ValidationError(msg.str());
    }
    if (ep.values[i] > 0.0) ++positive;
  }
  ConeSpec spec;
  spec.kind_ = ConeKind::RankK;
  spec.n_ = p.dim();
  spec.p_ = p.mat();
  spec.rank_ = positive;
  return spec;
}

ConeSpec ConeSpec::orthant(int n) {
  if (n < 1) throw ValidationError("orthant cone: dimension must be >= 1");
  ConeSpec spec;
  spec.kind_ = ConeKind::Orthant;
  spec.n_ = n;
  return spec;
}

ConeSpec ConeSpec::planar(const Eigen::Vector2d& g1, const Eigen::Vector2d& g2) {
  const double n1 = g1.norm();
  const double n2 = g2.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0)) {
    throw ValidationError("planar cone: generators must be nonzero");
  }
  const double c = cross2(g1, g2);
  const double d = g1.dot(g2);
  if (std::abs(c) <= 1e-12 * n1 * n2 && d < 0.0) {
    throw ValidationError("planar cone: generators are antiparallel, cone is not pointed");
  }
  ConeSpec spec;
  spec.kind_ = ConeKind::Planar;
  spec.n_ = 2;
  spec.g1_ = g1;
  spec.g2_ = g2;
  return spec;
}

std::string ConeSpec::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case ConeKind::Quadratic: out << "quadratic(mu=" << mu_ << ", n=" << n_ << ")"; break;
    case ConeKind::Loewner: out << "loewner(n=" << n_ << ")"; break;
    case ConeKind::RankK: out << "rankk(n=" << n_ << ", k=" << rank_ << ")"; break;
    case ConeKind::Orthant: out << "orthant(n=" << n_ << ")"; break;
    case ConeKind::Planar:
      out << "planar(g1=(" << g1_.x() << "," << g1_.y() << "), g2=(" << g2_.x() << ","
          << g2_.y() << "))";
      break;
  }
  return out.str();
}

double ConeMargin::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [name, value] : margins) m = std::min(m, value);
  return m;
}

ConeMargin make_margin(std::vector<std::pair<std::string, double>> margins, double scale) {
  ConeMargin cm;
  cm.margins = std::move(margins);
  cm.scale = std::max(1.0, scale);
  cm.member = cm.min_margin() >= -kMembershipTol * cm.scale;
  return cm;
}

ConeMargin quad_margin(double mu, const SpdPoint& sigma, const SymMatrix& x) {
  if (!(mu > 0.0 && mu < static_cast<double>(sigma.dim()))) {
    throw ValidationError("quad_margin: mu out of range (0, n)");
  }
  const SymMatrix y = whiten(sigma, x);
  const double t = y.trace();
  const double t2 = (y.mat() * y.mat()).trace();
  return make_margin({{"trace", t}, {"quadratic", t * t - mu * t2}}, y.frobenius_norm());
}

ConeMargin loewner_margin(const SpdPoint& sigma, const SymMatrix& x) {
  const SymMatrix y = whiten(sigma, x);
  const EigenPair ep = sym_eig(y);
  return make_margin({{"min_eigenvalue", ep.values.minCoeff()}}, y.frobenius_norm());
}

ConeMargin rankk_margin(const SymMatrix& p, const Vector& x) {
  if (p.dim() != x.size()) {
    throw ValidationError("rankk_margin: dimension mismatch");
  }
  const double q = x.dot(p.mat() * x);
  return make_margin({{"quadratic_form", q}}, x.norm());
}

ConeMargin orthant_margin(const Vector& v) {
  if (v.size() < 1) throw ValidationError("orthant_margin: empty vector");
  return make_margin({{"min_component", v.minCoeff()}}, v.cwiseAbs().maxCoeff());
}

ConeMargin planar_margin(const ConeSpec& spec, const Eigen::Vector2d& v) {
  if (spec.kind() != ConeKind::Planar) {
    throw ValidationError("planar_margin: spec is not a planar cone");
  }
  const Eigen::Vector2d g1 = spec.g1();
  const Eigen::Vector2d g2 = spec.g2();
  const double c = cross2(g1, g2);
  if (std::abs(c) <= 1e-12 * g1.norm() * g2.norm()) {
    // Parallel generators: the cone degenerates to the ray through g1.
    return make_margin({{"on_ray", -std::abs(cross2(g1, v))}, {"along_ray", g1.dot(v)}},
                       v.norm() * g1.norm());
  }
  const double s = c > 0.0 ? 1.0 : -1.0;
  return make_margin({{"from_g1", s * cross2(g1, v)}, {"to_g2", s * cross2(v, g2)}},
                     v.norm() * std::max(g1.norm(), g2.norm()));
}

ConeMargin cone_margin(const ConeSpec& spec, const SpdPoint& sigma, const SymMatrix& x) {
  switch (spec.kind()) {
    case ConeKind::Quadratic: return quad_margin(spec.mu(), sigma, x);
    case ConeKind::Loewner: return loewner_margin(sigma, x);
    default:
      throw ValidationError("cone_margin: spec " + spec.describe() +
                            " is not an SPD tangent cone");
  }
}

ConeMargin vector_margin(const ConeSpec& spec, const Vector& v) {
  switch (spec.kind()) {
    case ConeKind::RankK: return rankk_margin(SymMatrix(spec.p()), v);
    case ConeKind::Orthant: return orthant_margin(v);
    case ConeKind::Planar: {
      if (v.size() != 2) throw ValidationError("vector_margin: planar cone expects a 2-vector");
      return planar_margin(spec, Eigen::Vector2d(v[0], v[1]));
    }
    default:
      throw ValidationError("vector_margin: spec " + spec.describe() +
                            " is not a flat vector cone");
  }
}

double ad_invariance_probe(const ConeSpec& spec, int trials, std::uint64_t seed) {
  if (spec.kind() != ConeKind::Quadratic && spec.kind() != ConeKind::Loewner) {
    throw ValidationError("ad_invariance_probe: spec must be quadratic or loewner");
  }
  const SpdPoint id = SpdPoint::Identity(spec.dim());
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const SymMatrix x = random_symmetric(rng, spec.dim());
    const Matrix q = random_orthogonal(rng, spec.dim());
    Matrix rotated = q * x.mat() * q.transpose();
    const SymMatrix qxq(0.5 * (rotated + rotated.transpose()));
    const ConeMargin base = cone_margin(spec, id, x);
    const ConeMargin conj = cone_margin(spec, id, qxq);
    for (std::size_t i = 0; i < base.margins.size(); ++i) {
      worst = std::max(worst, std::abs(base.margins[i].second - conj.margins[i].second));
    }
  }
  return worst;
}

}  // namespace conal
