#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conal/diffpos.hpp"
#include "test_util.hpp"

using namespace conal;
using conal::testing::max_abs_diff;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m.diagonal() << a, b;
  return m;
}

bool is_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff() >= -1e-12;
}

}  // namespace

TEST_CASE("map_apply basics") {
  Rng rng(41);
  const SpdPoint sigma = random_spd(rng, 3);

  CHECK(max_abs_diff(MapSpec::power(1.0).apply(sigma).mat(), sigma.mat()) <= 1e-10);

  const SpdPoint inv = MapSpec::inversion().apply(SpdPoint(diag2(2.0, 4.0)));
  CHECK(inv.mat()(0, 0) == doctest::Approx(0.5));
  CHECK(inv.mat()(1, 1) == doctest::Approx(0.25));

  const SpdPoint back = MapSpec::power(2.0).apply(MapSpec::power(0.5).apply(sigma));
  CHECK(testing::rel_diff(back.mat(), sigma.mat()) <= 1e-10);
}

TEST_CASE("translation off the manifold is a domain error") {
  const MapSpec shift = MapSpec::translation(SymMatrix(-2.0 * Matrix::Identity(2, 2)));
  CHECK_THROWS_AS(shift.apply(SpdPoint::Identity(2)), DomainError);
  const MapSpec ok = MapSpec::translation(SymMatrix::Identity(2));
  CHECK(ok.apply(SpdPoint::Identity(2)).mat()(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("map_differential analytic cases") {
  Rng rng(42);
  const SymMatrix x = random_symmetric(rng, 3);

  Matrix a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = rng.gaussian();
  const SpdPoint sigma = random_spd(rng, 3);
  const SymMatrix pushed = MapSpec::congruence_map(a).differential(sigma, x);
  CHECK(max_abs_diff(pushed.mat(), a * x.mat() * a.transpose()) <= 1e-12);

  const SymMatrix inv_push =
      MapSpec::inversion().differential(SpdPoint::Identity(3), x);
  CHECK(max_abs_diff(inv_push.mat(), -x.mat()) <= 1e-12);

  CHECK(max_abs_diff(MapSpec::translation(SymMatrix::Identity(3))
                         .differential(sigma, x)
                         .mat(),
                     x.mat()) == 0.0);
}

TEST_CASE("power differential matches finite differences") {
  Rng rng(43);
  const SpdPoint sigma = random_spd(rng, 3);
  const SymMatrix x = random_symmetric(rng, 3);
  const double r = 0.7;
  const double h = 1e-5 * sigma.mat().norm() / x.mat().norm();
  const Matrix fd = (sym_pow(SpdPoint(sigma.mat() + h * x.mat()), r).mat() -
                     sym_pow(SpdPoint(sigma.mat() - h * x.mat()), r).mat()) /
                    (2.0 * h);
  CHECK(max_abs_diff(MapSpec::power(r).differential(sigma, x).mat(), fd) <= 1e-6);
}

TEST_CASE("custom maps differentiate by central differences") {
  const MapSpec analytic = MapSpec::power(0.7);
  const MapSpec hooked = MapSpec::custom(
      [](const SpdPoint& s) { return sym_pow(s, 0.7); }, "pow07-hook");
  Rng rng(44);
  const SpdPoint sigma = random_spd(rng, 3);
  const SymMatrix x = random_symmetric(rng, 3);
  CHECK(max_abs_diff(hooked.differential(sigma, x).mat(),
                     analytic.differential(sigma, x).mat()) <= 1e-5);
}

TEST_CASE("chain rule through congruence then power") {
  Rng rng(45);
  Matrix a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = rng.gaussian();
  const MapSpec inner = MapSpec::congruence_map(a);
  const MapSpec outer = MapSpec::power(0.6);
  const MapSpec composed = MapSpec::custom(
      [&](const SpdPoint& s) { return outer.apply(inner.apply(s)); }, "pow-after-congruence");

  const SpdPoint sigma = random_spd(rng, 3);
  const SymMatrix x = random_symmetric(rng, 3);
  const SymMatrix chained =
      outer.differential(inner.apply(sigma), inner.differential(sigma, x));
  CHECK(max_abs_diff(composed.differential(sigma, x).mat(), chained.mat()) <= 1e-5);
}

TEST_CASE("power map scaling equivariance") {
  Rng rng(46);
  const SpdPoint sigma = random_spd(rng, 3);
  const SymMatrix x = random_symmetric(rng, 3);
  const double r = 0.4, c = 2.7;
  const MapSpec f = MapSpec::power(r);
  const SpdPoint scaled(c * sigma.mat());
  CHECK(testing::rel_diff(f.apply(scaled).mat(), std::pow(c, r) * f.apply(sigma).mat()) <=
        1e-9);
  CHECK(max_abs_diff(f.differential(scaled, SymMatrix(c * x.mat())).mat(),
                     std::pow(c, r) * f.differential(sigma, x).mat()) <= 1e-9);
}

TEST_CASE("congruence maps are differentially positive") {
  Rng rng(47);
  Matrix a(2, 2);
  a << 1.2, 0.3, -0.4, 0.9;
  for (const ConeSpec& spec : {ConeSpec::quadratic(1.0, 2), ConeSpec::loewner(2)}) {
    const PositivityReport report =
        diff_positivity_check(MapSpec::congruence_map(a), spec, 50, 10, 48);
    CHECK(report.min_post_margin >= -1e-9);
    CHECK(report.samples == 500);
  }
}

TEST_CASE("the identity power keeps margins unchanged") {
  const ConeSpec spec = ConeSpec::quadratic(1.0, 3);
  const PositivityReport report = diff_positivity_check(MapSpec::power(1.0), spec, 40, 10, 49);
  CHECK(report.min_post_margin >= -1e-9);
  // Boundary directions are included, so the minimum sits at the boundary.
  CHECK(report.min_post_margin <= 1e-6);
}

TEST_CASE("squaring loses differential positivity on the loewner cone") {
  const PositivityReport report =
      diff_positivity_check(MapSpec::power(2.0), ConeSpec::loewner(2), 200, 20, 50);
  CHECK(report.min_post_margin < 0.0);
  // The stored worst sample reproduces the failure.
  const SymMatrix pushed =
      MapSpec::power(2.0).differential(report.worst_point, report.worst_direction);
  const ConeMargin post = cone_margin(ConeSpec::loewner(2),
                                      MapSpec::power(2.0).apply(report.worst_point), pushed);
  CHECK(post.min_margin() == doctest::Approx(report.min_post_margin));
}

TEST_CASE("monotone scan sees no violations for operator-monotone powers") {
  CHECK(monotone_scan(MapSpec::power(0.5), ConeSpec::quadratic(1.0, 3), 500, 51).empty());
  Matrix a(3, 3);
  a << 1.0, 0.2, 0.0, -0.1, 0.8, 0.3, 0.0, 0.4, 1.2;
  CHECK(monotone_scan(MapSpec::congruence_map(a), ConeSpec::quadratic(1.0, 3), 200, 52)
            .empty());
  CHECK(monotone_scan(MapSpec::congruence_map(a), ConeSpec::loewner(3), 200, 53).empty());
}

TEST_CASE("inversion reverses the loewner order") {
  const ConeSpec spec = ConeSpec::loewner(2);
  const auto violations = monotone_scan(MapSpec::inversion(), spec, 200, 54);
  CHECK_FALSE(violations.empty());
  for (const MonotonicityViolation& v : violations) {
    // Forward images are unordered, reversed images are ordered.
    const SpdPoint f1 = MapSpec::inversion().apply(v.first);
    const SpdPoint f2 = MapSpec::inversion().apply(v.second);
    CHECK_FALSE(spd_order(spec, f1, f2).ordered);
    CHECK(spd_order(spec, f2, f1).margins.min_margin() >= -1e-9);
  }
}

TEST_CASE("monotone scan violations are re-verifiable at full precision") {
  const ConeSpec spec = ConeSpec::loewner(2);
  const auto violations = monotone_scan(MapSpec::power(2.0), spec, 300, 55);
  CHECK_FALSE(violations.empty());
  for (const MonotonicityViolation& v : violations) {
    const OrderVerdict pre = spd_order(spec, v.first, v.second);
    CHECK(pre.margins.min_margin() == doctest::Approx(v.pre_margins.min_margin()));
    CHECK(pre.margins.min_margin() >= -1e-9);
    const OrderVerdict post =
        spd_order(spec, MapSpec::power(2.0).apply(v.first), MapSpec::power(2.0).apply(v.second));
    CHECK(post.margins.min_margin() == doctest::Approx(v.post_margins.min_margin()));
    CHECK(post.margins.min_margin() < kViolationThreshold);
  }
}

TEST_CASE("counterexample search finds the classical square-map failure") {
  const auto witness = counterexample_search(2.0, ConeSpec::loewner(2), 10000, 56);
  REQUIRE(witness.has_value());
  // Independent verification with the flat PSD tests.
  CHECK(is_psd(witness->second.mat() - witness->first.mat()));
  const Matrix f1 = witness->first.mat() * witness->first.mat();
  const Matrix f2 = witness->second.mat() * witness->second.mat();
  CHECK_FALSE(is_psd(f2 - f1));
}

TEST_CASE("counterexample search on quadratic cones for fractional powers above one") {
  const auto witness = counterexample_search(1.5, ConeSpec::quadratic(1.0, 2), 10000, 57);
  REQUIRE(witness.has_value());
  const ConeSpec spec = ConeSpec::quadratic(1.0, 2);
  CHECK(spd_order(spec, witness->first, witness->second).ordered);
  CHECK_FALSE(spd_order(spec, MapSpec::power(1.5).apply(witness->first),
                        MapSpec::power(1.5).apply(witness->second))
                  .ordered);
}

TEST_CASE("no counterexample for the identity power") {
  CHECK_FALSE(counterexample_search(1.0, ConeSpec::loewner(2), 2000, 58).has_value());
  CHECK_FALSE(counterexample_search(1.0, ConeSpec::quadratic(1.0, 2), 2000, 59).has_value());
}
