#pragma once

#include <optional>
#include <string>

#include "conal/cone_fields.hpp"
#include "conal/sampling.hpp"
#include "conal/spd_geometry.hpp"

namespace conal {

// Outcome of an order test together with the margins that decided it.
struct OrderVerdict {
  bool ordered = false;
  ConeMargin margins;
  std::optional<std::string> witness;
};

// Flat-space order: a <= b iff b - a lies in the (constant) cone.
OrderVerdict vector_order(const ConeSpec& cone, const Vector& a, const Vector& b);

// Affine-invariant order on SPD points, decided spectrally: the margins
// are those of log(Sigma1^(-1/2) Sigma2 Sigma1^(-1/2)) against the base
// cone at the identity.
OrderVerdict spd_order(const ConeSpec& spec, const SpdPoint& sigma1, const SpdPoint& sigma2);

// Same order decided by sampling the connecting geodesic: membership of
// the curve velocity in the transported cone at `samples` parameter
// values in [0, 1].  Agrees with spd_order away from the cone boundary.
OrderVerdict spd_order_via_geodesic(const ConeSpec& spec, const SpdPoint& sigma1,
                                    const SpdPoint& sigma2, int samples);

// Heisenberg group element in upper-triangular coordinates: the matrix
// [[1, a, c], [0, 1, b], [0, 0, 1]].
struct HeisenbergElement {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

HeisenbergElement heisenberg_mul(const HeisenbergElement& lhs, const HeisenbergElement& rhs);

// Order on the quotient of the Heisenberg group by its center: elements
// project to (a, b) and are compared through a planar cone; the central
// coordinate never matters.
OrderVerdict heisenberg_order(const ConeSpec& planar_cone, const HeisenbergElement& g1,
                              const HeisenbergElement& g2);

// Placement of a sampled direction relative to the cone boundary.
enum class ConePlacement { Boundary, Interior };

// Random tangent at the identity lying on the boundary or in the interior
// of a quadratic or Loewner cone.
SymMatrix sample_spd_cone_direction(const ConeSpec& spec, ConePlacement placement, Rng& rng);

// Ordered pair produced by conal geodesic shooting: second =
// first^(1/2) exp(Y) first^(1/2) for a cone direction Y, so the pair is
// ordered by construction with the margins of Y.
struct OrderedPair {
  SpdPoint first;
  SpdPoint second;
};

OrderedPair sample_ordered_pair(const ConeSpec& spec, int n, ConePlacement placement, Rng& rng);

// Statistical partial-order axiom check on random points and constructed
// ordered chains.  Near-boundary verdicts are flagged, not counted as
// failures.
struct AxiomReport {
  int trials = 0;
  int reflexive_failures = 0;
  int transitive_failures = 0;
  int antisymmetry_failures = 0;
  int boundary_flags = 0;
};

AxiomReport order_axiom_probe(const ConeSpec& spec, int n, int trials, std::uint64_t seed);

}  // namespace conal
