#include "conal/diffpos.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace conal {

namespace {

Matrix spd_inverse(const SpdPoint& sigma) {
  return sigma.mat().llt().solve(Matrix::Identity(sigma.dim(), sigma.dim()));
}

}  // namespace

MapSpec MapSpec::power(double r) {
  MapSpec f;
  f.kind_ = Kind::Power;
  f.r_ = r;
  std::ostringstream name;
  name << "power(" << r << ")";
  f.name_ = name.str();
  return f;
}

MapSpec MapSpec::congruence_map(const Matrix& a) {
  MapSpec f;
  f.kind_ = Kind::Congruence;
  f.a_ = a;
  f.name_ = "congruence";
  return f;
}

MapSpec MapSpec::inversion() {
  MapSpec f;
  f.kind_ = Kind::Inversion;
  f.name_ = "inversion";
  return f;
}

MapSpec MapSpec::translation(const SymMatrix& b) {
  MapSpec f;
  f.kind_ = Kind::Translation;
  f.b_ = b.mat();
  f.name_ = "translation";
  return f;
}

MapSpec MapSpec::custom(std::function<SpdPoint(const SpdPoint&)> fn, std::string name) {
  MapSpec f;
  f.kind_ = Kind::Custom;
  f.fn_ = std::move(fn);
  f.name_ = std::move(name);
  return f;
}

SpdPoint MapSpec::apply(const SpdPoint& sigma) const {
  switch (kind_) {
    case Kind::Power: return sym_pow(sigma, r_);
    case Kind::Congruence: return congruence(a_, sigma);
    case Kind::Inversion: {
      Matrix inv = spd_inverse(sigma);
      return SpdPoint(0.5 * (inv + inv.transpose()));
    }
    case Kind::Translation: {
      // SpdPoint construction rejects translates that leave the manifold.
      return SpdPoint(sigma.mat() + b_);
    }
    case Kind::Custom: return fn_(sigma);
  }
  throw std::logic_error("MapSpec::apply: unreachable");
}

SymMatrix MapSpec::differential(const SpdPoint& sigma, const SymMatrix& x) const {
  if (sigma.dim() != x.dim()) {
    throw ValidationError("map_differential: dimension mismatch");
  }
  switch (kind_) {
    case Kind::Power: return frechet_pow(sigma, x, r_);
    case Kind::Congruence: {
      Matrix out = a_ * x.mat() * a_.transpose();
      return SymMatrix(0.5 * (out + out.transpose()));
    }
    case Kind::Inversion: {
      const Matrix inv = spd_inverse(sigma);
      Matrix out = -inv * x.mat() * inv;
      return SymMatrix(0.5 * (out + out.transpose()));
    }
    case Kind::Translation: return x;
    case Kind::Custom: {
      double h = std::max(1e-6, 1e-6 * sigma.mat().norm() / std::max(1e-300, x.mat().norm()));
      for (int attempt = 0; attempt < 5; ++attempt) {
        try {
          const SpdPoint plus(sigma.mat() + h * x.mat());
          const SpdPoint minus(sigma.mat() - h * x.mat());
          Matrix out = (fn_(plus).mat() - fn_(minus).mat()) / (2.0 * h);
          return SymMatrix(0.5 * (out + out.transpose()));
        } catch (const DomainError&) {
          if (attempt == 4) break;
          h *= 0.5;  // perturbed point left the manifold, take a smaller step
        }
      }
      throw DomainError("map_differential: finite-difference step leaves the SPD domain "
                        "even after shrinking");
    }
  }
  throw std::logic_error("MapSpec::differential: unreachable");
}

PositivityReport diff_positivity_check(const MapSpec& f, const ConeSpec& spec, int points,
                                       int dirs, std::uint64_t seed) {
  if (points < 1 || dirs < 1) {
    throw ValidationError("diff_positivity_check: points and dirs must be >= 1");
  }
  Rng rng(seed);
  const int n = spec.dim();
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<SpdPoint> worst_point;
  std::optional<SymMatrix> worst_direction;
  for (int p = 0; p < points; ++p) {
    const SpdPoint sigma = random_spd(rng, n);
    const SpdPoint image = f.apply(sigma);
    const Matrix sqrt_sigma = sym_sqrt(sigma).mat();
    for (int d = 0; d < dirs; ++d) {
      const ConePlacement placement =
          d % 2 == 0 ? ConePlacement::Boundary : ConePlacement::Interior;
      const SymMatrix y = sample_spd_cone_direction(spec, placement, rng);
      Matrix transported = sqrt_sigma * y.mat() * sqrt_sigma;
      const SymMatrix x(0.5 * (transported + transported.transpose()));
      const SymMatrix pushed = f.differential(sigma, x);
      const ConeMargin post = cone_margin(spec, image, pushed);
      if (post.min_margin() < min_margin) {
        min_margin = post.min_margin();
        worst_point = sigma;
        worst_direction = x;
      }
    }
  }
  return PositivityReport{min_margin, *worst_point, *worst_direction, points * dirs};
}

std::vector<MonotonicityViolation> monotone_scan(const MapSpec& f, const ConeSpec& spec,
                                                 int pairs, std::uint64_t seed,
                                                 double threshold) {
  if (pairs < 1) throw ValidationError("monotone_scan: pairs must be >= 1");
  Rng rng(seed);
  std::vector<MonotonicityViolation> violations;
  for (int k = 0; k < pairs; ++k) {
    const ConePlacement placement =
        k % 2 == 0 ? ConePlacement::Boundary : ConePlacement::Interior;
    const OrderedPair pair = sample_ordered_pair(spec, spec.dim(), placement, rng);
    const OrderVerdict pre = spd_order(spec, pair.first, pair.second);
    const OrderVerdict post = spd_order(spec, f.apply(pair.first), f.apply(pair.second));
    if (post.margins.min_margin() < threshold) {
      violations.push_back(
          MonotonicityViolation{pair.first, pair.second, pre.margins, post.margins});
    }
  }
  return violations;
}

std::optional<MonotonicityViolation> counterexample_search(double r, const ConeSpec& spec,
                                                           int budget, std::uint64_t seed) {
  if (spec.dim() < 2) {
    throw ValidationError("counterexample_search: cone dimension must be >= 2");
  }
  const MapSpec f = MapSpec::power(r);
  Rng rng(seed);
  for (int k = 0; k < budget; ++k) {
    const OrderedPair pair =
        sample_ordered_pair(spec, spec.dim(), ConePlacement::Boundary, rng);
    const OrderVerdict pre = spd_order(spec, pair.first, pair.second);
    const OrderVerdict post = spd_order(spec, f.apply(pair.first), f.apply(pair.second));
    if (post.margins.min_margin() < kViolationThreshold) {
      return MonotonicityViolation{pair.first, pair.second, pre.margins, post.margins};
    }
  }
  return std::nullopt;
}

}  // namespace conal
