#pragma once

#include <Eigen/Dense>
#include <string>

#include "conal/errors.hpp"

namespace conal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative tolerance for accepting an input as symmetric.  Inputs within
// tolerance are symmetrized as (S + S^T)/2; anything worse is rejected.
inline constexpr double kSymmetryTol = 1e-12;

// Relative floor on eigenvalues of a positive definite point.  Matrices
// with smaller eigenvalues are rejected outright, never clamped.
inline constexpr double kSpdFloor = 1e-12;

// Dense real symmetric matrix.  Construction symmetrizes the input and
// rejects anything whose asymmetry exceeds kSymmetryTol relative to the
// largest entry.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m);

  static SymMatrix Zero(int n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix Identity(int n) { return SymMatrix(Matrix::Identity(n, n)); }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }

  double trace() const { return mat_.trace(); }
  double frobenius_norm() const { return mat_.norm(); }

 private:
  Matrix mat_;
};

// Symmetric positive definite matrix: a point of the SPD manifold.
// All eigenvalues must exceed kSpdFloor * max(1, maxabs).
class SpdPoint {
 public:
  explicit SpdPoint(Matrix m);
  explicit SpdPoint(const SymMatrix& s) : SpdPoint(s.mat()) {}

  static SpdPoint Identity(int n) { return SpdPoint(Matrix::Identity(n, n)); }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  SymMatrix sym() const { return SymMatrix(mat_); }

 private:
  Matrix mat_;
};

// Eigendecomposition S = U diag(values) U^T with ascending eigenvalues and
// orthonormal columns in U.
struct EigenPair {
  Vector values;
  Matrix vectors;
};

// Spectral function tags accepted by sym_fn.
enum class SymFn { Log, Exp, Sqrt, InvSqrt, Pow };

EigenPair sym_eig(const SymMatrix& s);

// U diag(f(lambda)) U^T.  Log, Sqrt, InvSqrt and Pow with non-integer
// exponent require an SPD argument; violations raise DomainError naming
// the offending eigenvalue.
SymMatrix sym_fn(const SymMatrix& s, SymFn f, double power = 0.0);

inline SymMatrix sym_log(const SpdPoint& p) { return sym_fn(p.sym(), SymFn::Log); }
inline SpdPoint sym_exp(const SymMatrix& s) { return SpdPoint(sym_fn(s, SymFn::Exp).mat()); }
inline SpdPoint sym_sqrt(const SpdPoint& p) { return SpdPoint(sym_fn(p.sym(), SymFn::Sqrt).mat()); }
inline SpdPoint sym_invsqrt(const SpdPoint& p) {
  return SpdPoint(sym_fn(p.sym(), SymFn::InvSqrt).mat());
}
inline SpdPoint sym_pow(const SpdPoint& p, double r) {
  return SpdPoint(sym_fn(p.sym(), SymFn::Pow, r).mat());
}

// First divided differences of t -> t^r on the eigenvalue grid:
// G_ij = (li^r - lj^r)/(li - lj), G_ii = r li^(r-1).  Near-degenerate
// pairs (|li - lj| <= 1e-8 max(li, lj)) use the derivative at the mean
// to avoid cancellation.
Matrix pow_divided_differences(const Vector& eigenvalues, double r);

// Frechet derivative of Sigma -> Sigma^r at Sigma in direction X:
// U (G o (U^T X U)) U^T with G from pow_divided_differences.
SymMatrix frechet_pow(const SpdPoint& sigma, const SymMatrix& x, double r);

}  // namespace conal
