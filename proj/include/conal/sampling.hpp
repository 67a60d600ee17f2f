#pragma once

#include <cstdint>
#include <random>

#include "conal/symmat.hpp"

namespace conal {

// Deterministic random source.  The raw engine is std::mt19937_64; the
// distributions are spelled out here (instead of <random>'s, whose output
// is implementation-defined) so that a fixed seed yields identical bytes
// on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via the polar method.
  double gaussian();

  std::uint64_t raw() { return engine_(); }

  // Independent substream for parallel work: one child per index, all
  // reproducible from the parent seed.
  Rng spawn(std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// n-vector of iid standard normals.
Vector random_vector(Rng& rng, int n);

// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the
// sign of R's diagonal absorbed into Q.
Matrix random_orthogonal(Rng& rng, int n);

// Random symmetric matrix with iid Gaussian upper triangle.
SymMatrix random_symmetric(Rng& rng, int n);

// Random SPD point Q diag(exp(u)) Q^T with u uniform in [-2, 2].
SpdPoint random_spd(Rng& rng, int n);

}  // namespace conal
