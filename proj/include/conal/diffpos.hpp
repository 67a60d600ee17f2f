#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conal/conal_order.hpp"

namespace conal {

// Map on the SPD manifold with an analytic differential where one exists;
// custom maps fall back to central finite differences.
class MapSpec {
 public:
  static MapSpec power(double r);
  static MapSpec congruence_map(const Matrix& a);
  static MapSpec inversion();
  static MapSpec translation(const SymMatrix& b);
  static MapSpec custom(std::function<SpdPoint(const SpdPoint&)> fn, std::string name);

  const std::string& name() const { return name_; }
  double power_exponent() const { return r_; }

  SpdPoint apply(const SpdPoint& sigma) const;
  SymMatrix differential(const SpdPoint& sigma, const SymMatrix& x) const;

 private:
  enum class Kind { Power, Congruence, Inversion, Translation, Custom };

  MapSpec() = default;

  Kind kind_ = Kind::Power;
  double r_ = 1.0;
  Matrix a_;
  Matrix b_;
  std::function<SpdPoint(const SpdPoint&)> fn_;
  std::string name_;
};

inline SpdPoint map_apply(const MapSpec& f, const SpdPoint& sigma) { return f.apply(sigma); }
inline SymMatrix map_differential(const MapSpec& f, const SpdPoint& sigma, const SymMatrix& x) {
  return f.differential(sigma, x);
}

// Worst observed post-image margin of dF over sampled points and cone
// directions; negative values witness a failure of differential
// positivity.
struct PositivityReport {
  double min_post_margin;
  SpdPoint worst_point;
  SymMatrix worst_direction;
  int samples;
};

PositivityReport diff_positivity_check(const MapSpec& f, const ConeSpec& spec, int points,
                                       int dirs, std::uint64_t seed);

// An ordered input pair whose images fail the order test, kept at full
// precision so the verdict can be re-derived independently.
struct MonotonicityViolation {
  SpdPoint first;
  SpdPoint second;
  ConeMargin pre_margins;
  ConeMargin post_margins;
};

// Margin below which an image pair counts as a genuine violation rather
// than boundary jitter.
inline constexpr double kViolationThreshold = -1e-7;

// Order-preservation scan over conally generated pairs: applies F to both
// ends and collects pairs whose images are not ordered.
std::vector<MonotonicityViolation> monotone_scan(const MapSpec& f, const ConeSpec& spec,
                                                 int pairs, std::uint64_t seed,
                                                 double threshold = kViolationThreshold);

// Randomized hunt for a monotonicity counterexample of the power map
// Sigma -> Sigma^r, sampling ordered pairs near the cone boundary.
// Returns the first violation, or nothing within the budget.
std::optional<MonotonicityViolation> counterexample_search(double r, const ConeSpec& spec,
                                                           int budget, std::uint64_t seed);

}  // namespace conal
