#pragma once

#include "conal/symmat.hpp"

namespace conal {

// Geodesic of the affine-invariant metric between two SPD points,
// parameterized so that point(0) = start and point(1) = end.
// log_velocity is Lambda = log(start^(-1/2) end start^(-1/2)).
struct GeodesicSegment {
  SpdPoint start;
  SpdPoint end;
  SymMatrix log_velocity;
};

// Group action Sigma -> A Sigma A^T (symmetrized).  A must be invertible:
// condition estimate above 1e12 is rejected.
SpdPoint congruence(const Matrix& a, const SpdPoint& sigma);

// Affine-invariant Riemannian distance
// (sum_i log^2 lambda_i(Sigma1^-1 Sigma2))^(1/2), computed from the
// spectrum of the symmetric similar matrix Sigma1^(-1/2) Sigma2 Sigma1^(-1/2).
double ai_distance(const SpdPoint& sigma1, const SpdPoint& sigma2);

GeodesicSegment geodesic(const SpdPoint& start, const SpdPoint& end);

// Start the geodesic at `start` with tangent velocity given at the point
// (not pulled back); point(1) = start^(1/2) exp(start^(-1/2) X start^(-1/2)) start^(1/2).
GeodesicSegment geodesic_shoot(const SpdPoint& start, const SymMatrix& velocity);

// start^(1/2) exp(t Lambda) start^(1/2); t may lie outside [0, 1].
SpdPoint geodesic_point(const GeodesicSegment& seg, double t);

// start^(1/2) Lambda exp(t Lambda) start^(1/2), the curve velocity at t.
SymMatrix geodesic_velocity(const GeodesicSegment& seg, double t);

}  // namespace conal
