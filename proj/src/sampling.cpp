#include "conal/sampling.hpp"

#include <cmath>

namespace conal {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  have_spare_ = true;
  return u * factor;
}

Rng Rng::spawn(std::uint64_t index) {
  // splitmix64 of (base draw, index) decorrelates child streams.
  std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return Rng(z ^ (z >> 31));
}

Vector random_vector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

Matrix random_orthogonal(Rng& rng, int n) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

SymMatrix random_symmetric(Rng& rng, int n) {
  Matrix s(n, n);
  for (int i = 0; i < n; ++i) {
    s(i, i) = rng.gaussian();
    for (int j = 0; j < i; ++j) {
      const double x = rng.gaussian();
      s(i, j) = x;
      s(j, i) = x;
    }
  }
  return SymMatrix(s);
}

SpdPoint random_spd(Rng& rng, int n) {
  const Matrix q = random_orthogonal(rng, n);
  Vector d(n);
  for (int i = 0; i < n; ++i) d[i] = std::exp(rng.uniform(-2.0, 2.0));
  Matrix m = q * d.asDiagonal() * q.transpose();
  return SpdPoint(0.5 * (m + m.transpose()));
}

}  // namespace conal
