#include "conal/symmat.hpp"

#include <cmath>
#include <sstream>

namespace conal {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Largest |S_ij - S_ji|, for the validation message.
double max_asymmetry(const Matrix& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

bool is_integer(double r) { return r == std::floor(r) && std::isfinite(r); }

}  // namespace

SymMatrix::SymMatrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ValidationError("SymMatrix: expected square matrix of dimension >= 1, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw ValidationError("SymMatrix: non-finite entries");
  }
  const double asym = max_asymmetry(m);
  const double scale = std::max(1.0, max_abs(m));
  if (asym > kSymmetryTol * scale) {
    std::ostringstream msg;
    msg << "SymMatrix: input is not symmetric, max |S_ij - S_ji| = " << asym
        << " exceeds " << kSymmetryTol * scale;
    throw ValidationError(msg.str());
  }
  mat_ = 0.5 * (m + m.transpose());
}

SpdPoint::SpdPoint(Matrix m) {
  SymMatrix s(std::move(m));
  const double floor = kSpdFloor * std::max(1.0, s.mat().cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.mat(), Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (!(min_eig > floor)) {
    std::ostringstream msg;
    msg << "SpdPoint: matrix is not positive definite, min eigenvalue " << min_eig
        << " is below floor " << floor;
    throw DomainError(msg.str());
  }
  mat_ = s.mat();
}

EigenPair sym_eig(const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.mat());
  if (es.info() != Eigen::Success) {
    throw DomainError("sym_eig: eigendecomposition failed to converge");
  }
  return EigenPair{es.eigenvalues(), es.eigenvectors()};
}

SymMatrix sym_fn(const SymMatrix& s, SymFn f, double power) {
  const EigenPair ep = sym_eig(s);
  const bool needs_spd = f == SymFn::Log || f == SymFn::Sqrt || f == SymFn::InvSqrt ||
                         (f == SymFn::Pow && !is_integer(power));
  if (needs_spd) {
    const double floor = kSpdFloor * std::max(1.0, s.mat().cwiseAbs().maxCoeff());
    if (!(ep.values.minCoeff() > floor)) {
      std::ostringstream msg;
      msg << "sym_fn: argument must be positive definite, offending eigenvalue "
          << ep.values.minCoeff();
      throw DomainError(msg.str());
    }
  }
  Vector mapped(ep.values.size());
  for (int i = 0; i < ep.values.size(); ++i) {
    const double lam = ep.values[i];
    switch (f) {
      case SymFn::Log: mapped[i] = std::log(lam); break;
      case SymFn::Exp: mapped[i] = std::exp(lam); break;
      case SymFn::Sqrt: mapped[i] = std::sqrt(lam); break;
      case SymFn::InvSqrt: mapped[i] = 1.0 / std::sqrt(lam); break;
      case SymFn::Pow: mapped[i] = std::pow(lam, power); break;
    }
  }
  Matrix out = ep.vectors * mapped.asDiagonal() * ep.vectors.transpose();
  return SymMatrix(0.5 * (out + out.transpose()));
}

Matrix pow_divided_differences(const Vector& eigenvalues, double r) {
  const int n = static_cast<int>(eigenvalues.size());
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double li = eigenvalues[i];
      const double lj = eigenvalues[j];
      double value;
      if (std::abs(li - lj) <= 1e-8 * std::max(std::abs(li), std::abs(lj))) {
        value = r * std::pow(0.5 * (li + lj), r - 1.0);
      } else {
        value = (std::pow(li, r) - std::pow(lj, r)) / (li - lj);
      }
      g(i, j) = value;
      g(j, i) = value;
    }
  }
  return g;
}

SymMatrix frechet_pow(const SpdPoint& sigma, const SymMatrix& x, double r) {
  if (sigma.dim() != x.dim()) {
    throw ValidationError("frechet_pow: dimension mismatch");
  }
  const EigenPair ep = sym_eig(sigma.sym());
  const Matrix g = pow_divided_differences(ep.values, r);
  const Matrix xt = ep.vectors.transpose() * x.mat() * ep.vectors;
  Matrix out = ep.vectors * g.cwiseProduct(xt) * ep.vectors.transpose();
  return SymMatrix(0.5 * (out + out.transpose()));
}

}  // namespace conal
