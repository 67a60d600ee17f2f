#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conal/symmat.hpp"

namespace conal {

// Relative half-width of the membership band around zero margin.
inline constexpr double kMembershipTol = 1e-10;

enum class ConeKind { Quadratic, Loewner, RankK, Orthant, Planar };

// Description of a base cone at the identity together with the ambient
// dimension.  SPD-tangent cones (Quadratic, Loewner) are transported by
// congruence; flat cones (RankK, Orthant, Planar) live in a vector space.
class ConeSpec {
 public:
  // Trace-pinched cone {tr X >= 0, (tr X)^2 - mu tr(X^2) >= 0}; requires
  // 0 < mu < n (the half-space and ray limits are excluded).
  static ConeSpec quadratic(double mu, int n);

  // Positive semidefinite cone at the identity.
  static ConeSpec loewner(int n);

  // {x : x^T P x >= 0} for symmetric P with no zero eigenvalues; the rank
  // is the number of positive eigenvalues of P.
  static ConeSpec rankk(const SymMatrix& p);

  // Nonnegative orthant of R^n.
  static ConeSpec orthant(int n);

  // Pointed planar cone spanned between two generators in R^2.
  static ConeSpec planar(const Eigen::Vector2d& g1, const Eigen::Vector2d& g2);

  ConeKind kind() const { return kind_; }
  int dim() const { return n_; }
  double mu() const { return mu_; }
  const Matrix& p() const { return p_; }
  int rank() const { return rank_; }
  const Eigen::Vector2d& g1() const { return g1_; }
  const Eigen::Vector2d& g2() const { return g2_; }

  std::string describe() const;

 private:
  ConeSpec() = default;

  ConeKind kind_ = ConeKind::Loewner;
  int n_ = 0;
  double mu_ = 0.0;  // Quadratic
  Matrix p_;         // RankK
  int rank_ = 0;     // RankK: positive eigenvalue count of P
  Eigen::Vector2d g1_{0, 0}, g2_{0, 0};  // Planar
};

// Signed membership margins.  Every margin must clear -kMembershipTol *
// scale for the direction to count as a member; raw values are kept so
// callers can apply stricter policies.
struct ConeMargin {
  std::vector<std::pair<std::string, double>> margins;
  bool member = false;
  double scale = 1.0;

  double min_margin() const;
};

ConeMargin make_margin(std::vector<std::pair<std::string, double>> margins, double scale);

// Margins of X against the quadratic cone transported to Sigma:
// m1 = tr(Sigma^-1 X), m2 = m1^2 - mu tr(Sigma^-1 X Sigma^-1 X), evaluated
// on the whitened direction Sigma^(-1/2) X Sigma^(-1/2).
ConeMargin quad_margin(double mu, const SpdPoint& sigma, const SymMatrix& x);

// Margin of X against the Loewner cone transported to Sigma:
// lambda_min(Sigma^(-1/2) X Sigma^(-1/2)).
ConeMargin loewner_margin(const SpdPoint& sigma, const SymMatrix& x);

// Margin of an n-vector against the rank-k quadratic cone {x^T P x >= 0}.
ConeMargin rankk_margin(const SymMatrix& p, const Vector& x);

// Margin of a displacement against the nonnegative orthant: min_i v_i.
ConeMargin orthant_margin(const Vector& v);

// Margins of a 2-vector against a planar generator cone; the two margins
// are the cross products against each generator, signed so that the wedge
// spanned counterclockwise from g1 to g2 gives nonnegative values.
ConeMargin planar_margin(const ConeSpec& spec, const Eigen::Vector2d& v);

// Dispatch for SPD-tangent cones (Quadratic or Loewner).
ConeMargin cone_margin(const ConeSpec& spec, const SpdPoint& sigma, const SymMatrix& x);

// Dispatch for flat cones (RankK, Orthant, Planar).
ConeMargin vector_margin(const ConeSpec& spec, const Vector& v);

// Empirical Ad-invariance check of a cone at the identity: max
// componentwise margin discrepancy between X and Q X Q^T over `trials`
// sampled orthogonal Q and Gaussian symmetric X.
double ad_invariance_probe(const ConeSpec& spec, int trials, std::uint64_t seed);

}  // namespace conal
