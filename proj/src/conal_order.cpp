#include "conal/conal_order.hpp"

#include <cmath>
#include <sstream>

namespace conal {

namespace {

constexpr double kBoundaryBand = 1e-8;

SymMatrix log_whitened(const SpdPoint& sigma1, const SpdPoint& sigma2) {
  const Matrix w = sym_invsqrt(sigma1).mat();
  Matrix m = w * sigma2.mat() * w;
  return sym_fn(SymMatrix(0.5 * (m + m.transpose())), SymFn::Log);
}

}  // namespace

OrderVerdict vector_order(const ConeSpec& cone, const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw ValidationError("vector_order: endpoint dimensions differ");
  }
  OrderVerdict verdict;
  verdict.margins = vector_margin(cone, b - a);
  verdict.ordered = verdict.margins.member;
  std::ostringstream w;
  w << "straight line from a to b, displacement norm " << (b - a).norm();
  verdict.witness = w.str();
  return verdict;
}

OrderVerdict spd_order(const ConeSpec& spec, const SpdPoint& sigma1, const SpdPoint& sigma2) {
  if (sigma1.dim() != sigma2.dim()) {
    throw ValidationError("spd_order: point dimensions differ");
  }
  const SymMatrix log_velocity = log_whitened(sigma1, sigma2);
  OrderVerdict verdict;
  verdict.margins = cone_margin(spec, SpdPoint::Identity(sigma1.dim()), log_velocity);
  verdict.ordered = verdict.margins.member;
  std::ostringstream w;
  w << "geodesic with log-velocity norm " << log_velocity.frobenius_norm();
  verdict.witness = w.str();
  return verdict;
}

OrderVerdict spd_order_via_geodesic(const ConeSpec& spec, const SpdPoint& sigma1,
                                    const SpdPoint& sigma2, int samples) {
  if (samples < 2) {
    throw ValidationError("spd_order_via_geodesic: need at least 2 samples");
  }
  const GeodesicSegment seg = geodesic(sigma1, sigma2);
  OrderVerdict verdict;
  verdict.ordered = true;
  bool first = true;
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / (samples - 1);
    const SpdPoint point = geodesic_point(seg, t);
    const SymMatrix velocity = geodesic_velocity(seg, t);
    const ConeMargin m = cone_margin(spec, point, velocity);
    verdict.ordered = verdict.ordered && m.member;
    // Keep the decisive sample: a non-member beats any member, then the
    // smaller minimum margin wins.
    const bool replaces = first ||
                          (!m.member && verdict.margins.member) ||
                          (m.member == verdict.margins.member &&
                           m.min_margin() < verdict.margins.min_margin());
    if (replaces) {
      verdict.margins = m;
      first = false;
    }
  }
  std::ostringstream w;
  w << "geodesic sampled at " << samples << " points";
  verdict.witness = w.str();
  return verdict;
}

HeisenbergElement heisenberg_mul(const HeisenbergElement& lhs, const HeisenbergElement& rhs) {
  return HeisenbergElement{lhs.a + rhs.a, lhs.b + rhs.b, lhs.c + rhs.c + lhs.a * rhs.b};
}

OrderVerdict heisenberg_order(const ConeSpec& planar_cone, const HeisenbergElement& g1,
                              const HeisenbergElement& g2) {
  const Eigen::Vector2d delta(g2.a - g1.a, g2.b - g1.b);
  OrderVerdict verdict;
  verdict.margins = planar_margin(planar_cone, delta);
  verdict.ordered = verdict.margins.member;
  std::ostringstream w;
  w << "quotient displacement (" << delta.x() << ", " << delta.y() << ")";
  verdict.witness = w.str();
  return verdict;
}

SymMatrix sample_spd_cone_direction(const ConeSpec& spec, ConePlacement placement, Rng& rng) {
  const int n = spec.dim();
  switch (spec.kind()) {
    case ConeKind::Quadratic: {
      // Fixed trace t0, traceless part scaled to solve the quadratic
      // margin exactly (boundary) or strictly inside (interior).
      const double t0 = rng.uniform(0.2, 2.0);
      Matrix w;
      double norm;
      do {
        const SymMatrix raw = random_symmetric(rng, n);
        w = raw.mat() - (raw.trace() / n) * Matrix::Identity(n, n);
        norm = w.norm();
      } while (norm < 1e-8);
      w /= norm;
      const double beta_boundary = t0 * std::sqrt(1.0 / spec.mu() - 1.0 / n);
      const double beta = placement == ConePlacement::Boundary
                              ? beta_boundary
                              : rng.uniform(0.0, 0.9) * beta_boundary;
      return SymMatrix((t0 / n) * Matrix::Identity(n, n) + beta * w);
    }
    case ConeKind::Loewner: {
      const Matrix v = random_orthogonal(rng, n);
      Vector s(n);
      for (int i = 0; i < n; ++i) s[i] = rng.uniform(0.1, 1.5);
      if (placement == ConePlacement::Boundary) {
        // Zero out a nonempty proper eigenvalue subset.
        const int zeros = n == 1 ? 1 : 1 + static_cast<int>(rng.uniform() * (n - 1));
        for (int i = 0; i < zeros; ++i) s[i] = 0.0;
      }
      Matrix y = v * s.asDiagonal() * v.transpose();
      return SymMatrix(0.5 * (y + y.transpose()));
    }
    default:
      throw ValidationError("sample_spd_cone_direction: spec must be quadratic or loewner");
  }
}

OrderedPair sample_ordered_pair(const ConeSpec& spec, int n, ConePlacement placement, Rng& rng) {
  const SpdPoint first = random_spd(rng, n);
  const SymMatrix y = sample_spd_cone_direction(spec, placement, rng);
  const Matrix s = sym_sqrt(first).mat();
  const Matrix e = sym_fn(y, SymFn::Exp).mat();
  Matrix second = s * e * s;
  return OrderedPair{first, SpdPoint(0.5 * (second + second.transpose()))};
}

AxiomReport order_axiom_probe(const ConeSpec& spec, int n, int trials, std::uint64_t seed) {
  if (trials < 0) throw ValidationError("order_axiom_probe: trials must be >= 0");
  AxiomReport report;
  report.trials = trials;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    // Reflexivity on a random point.
    const SpdPoint sigma = random_spd(rng, n);
    if (!spd_order(spec, sigma, sigma).ordered) ++report.reflexive_failures;

    // Transitivity along a two-leg conal chain.
    const OrderedPair leg1 = sample_ordered_pair(spec, n, ConePlacement::Interior, rng);
    const SymMatrix y2 = sample_spd_cone_direction(spec, ConePlacement::Interior, rng);
    const Matrix s2 = sym_sqrt(leg1.second).mat();
    Matrix third_raw = s2 * sym_fn(y2, SymFn::Exp).mat() * s2;
    const SpdPoint third(0.5 * (third_raw + third_raw.transpose()));
    const OrderVerdict chain = spd_order(spec, leg1.first, third);
    if (!chain.ordered) {
      if (std::abs(chain.margins.min_margin()) <= kBoundaryBand) {
        ++report.boundary_flags;
      } else {
        ++report.transitive_failures;
      }
    }

    // Antisymmetry: mutually ordered points must coincide metrically.
    const SpdPoint a = leg1.first;
    const SpdPoint b = leg1.second;
    const OrderVerdict forward = spd_order(spec, a, b);
    const OrderVerdict backward = spd_order(spec, b, a);
    if (forward.ordered && backward.ordered && ai_distance(a, b) > kBoundaryBand) {
      ++report.antisymmetry_failures;
    }
    const SpdPoint c = random_spd(rng, n);
    const SpdPoint d = random_spd(rng, n);
    const OrderVerdict cd = spd_order(spec, c, d);
    const OrderVerdict dc = spd_order(spec, d, c);
    if (cd.ordered && dc.ordered && ai_distance(c, d) > kBoundaryBand) {
      ++report.antisymmetry_failures;
    }
  }
  return report;
}

}  // namespace conal
