// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails.  Tolerances are pinned in the checks themselves.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "conal/conal_order.hpp"
#include "conal/consensus.hpp"
#include "conal/diffpos.hpp"

using namespace conal;

namespace {

constexpr double kPi = std::numbers::pi;

struct CriterionResult {
  bool pass = true;
  std::string detail;
};

struct Check {
  CriterionResult result;

  void require(bool condition, const std::string& message) {
    if (!condition && result.pass) {
      result.pass = false;
      result.detail = message;
    }
  }

  void note(const std::string& message) {
    if (result.pass && result.detail.empty()) result.detail = message;
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

// --------------------------------------------------------------------
// 1. Power maps with r in [0, 1] are monotone for every quadratic cone.

CriterionResult criterion_loewner_heinz_monotone() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  int cells = 0;
  std::uint64_t seed = 1000;
  for (int n : {2, 3, 5}) {
    for (double mu : {0.5, 1.0, n - 0.5}) {
      for (int r_step = 1; r_step <= 10; ++r_step) {
        const double r = 0.1 * r_step;
        const auto violations =
            monotone_scan(MapSpec::power(r), ConeSpec::quadratic(mu, n), 500, ++seed, -1e-9);
        std::ostringstream cell;
        cell << "violations at n=" << n << " mu=" << mu << " r=" << r << ": "
             << violations.size();
        check.require(violations.empty(), cell.str());
        ++cells;
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.require(seconds < 60.0, "runtime " + fmt(seconds) + "s exceeds 60s");
  check.note(std::to_string(cells) + " cells x 500 pairs clean in " + fmt(seconds) + "s");
  return check.result;
}

// --------------------------------------------------------------------
// 2. Powers above one admit counterexamples, re-verified independently.

CriterionResult criterion_counterexamples() {
  Check check;
  for (double r : {1.5, 2.0}) {
    for (const ConeSpec& spec : {ConeSpec::loewner(2), ConeSpec::quadratic(1.0, 2)}) {
      const auto witness = counterexample_search(r, spec, 10000, 2024);
      std::ostringstream label;
      label << "r=" << r << " on " << spec.describe();
      check.require(witness.has_value(), "no counterexample for " + label.str());
      if (!witness) continue;
      const OrderVerdict pre = spd_order(spec, witness->first, witness->second);
      const OrderVerdict post = spd_order(spec, MapSpec::power(r).apply(witness->first),
                                          MapSpec::power(r).apply(witness->second));
      check.require(pre.margins.min_margin() >= -1e-9,
                    "witness pair is not ordered for " + label.str());
      check.require(!post.ordered, "witness images still ordered for " + label.str());
    }
  }
  check.note("violations found and re-verified for r in {1.5, 2.0} on both specs");
  return check.result;
}

// --------------------------------------------------------------------
// 3. The geodesic order test agrees with the spectral one.

CriterionResult criterion_geodesic_equivalence() {
  Check check;
  Rng rng(3000);
  int compared = 0, skipped = 0;
  for (const ConeSpec& spec : {ConeSpec::quadratic(1.0, 3), ConeSpec::loewner(3)}) {
    for (int trial = 0; trial < 500; ++trial) {
      SpdPoint s1 = random_spd(rng, 3);
      SpdPoint s2 = random_spd(rng, 3);
      if (trial % 2 == 0) {
        const ConePlacement placement =
            trial % 4 == 0 ? ConePlacement::Boundary : ConePlacement::Interior;
        const OrderedPair pair = sample_ordered_pair(spec, 3, placement, rng);
        s1 = pair.first;
        s2 = pair.second;
      }
      const OrderVerdict spectral = spd_order(spec, s1, s2);
      if (std::abs(spectral.margins.min_margin()) <= 1e-8) {
        ++skipped;
        continue;
      }
      const OrderVerdict sampled = spd_order_via_geodesic(spec, s1, s2, 50);
      check.require(sampled.ordered == spectral.ordered,
                    "disagreement on a non-boundary pair (trial " + std::to_string(trial) +
                        " on " + spec.describe() + ")");
      ++compared;
    }
  }
  check.note(std::to_string(compared) + " non-boundary pairs agree, " +
             std::to_string(skipped) + " boundary pairs excluded");
  return check.result;
}

// --------------------------------------------------------------------
// 4. Distance invariance under congruence and inversion.

CriterionResult criterion_metric_invariance() {
  Check check;
  Rng rng(4000);
  int tested = 0;
  for (int n : {2, 5}) {
    for (int trial = 0; trial < 500; ++trial) {
      const SpdPoint s1 = random_spd(rng, n);
      const SpdPoint s2 = random_spd(rng, n);
      const double base = ai_distance(s1, s2);

      Matrix a(n, n);
      do {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
      } while (std::abs(a.determinant()) < 1e-3);
      const double moved = ai_distance(congruence(a, s1), congruence(a, s2));
      check.require(std::abs(moved - base) <= 1e-10 * std::max(1.0, base),
                    "congruence invariance off by " + fmt(std::abs(moved - base)));

      const SpdPoint inv1(sym_fn(s1.sym(), SymFn::Pow, -1.0).mat());
      const SpdPoint inv2(sym_fn(s2.sym(), SymFn::Pow, -1.0).mat());
      const double inverted = ai_distance(inv1, inv2);
      check.require(std::abs(inverted - base) <= 1e-10 * std::max(1.0, base),
                    "inversion isometry off by " + fmt(std::abs(inverted - base)));
      ++tested;
    }
  }
  check.note(std::to_string(tested) + " pairs within 1e-10 relative");
  return check.result;
}

// --------------------------------------------------------------------
// 5. Ad-invariance of the base cones at the identity.

CriterionResult criterion_ad_invariance() {
  Check check;
  std::uint64_t seed = 5000;
  for (int n : {2, 4}) {
    const double quad = ad_invariance_probe(ConeSpec::quadratic(1.0, n), 200, ++seed);
    check.require(quad <= 1e-9, "quadratic discrepancy " + fmt(quad) + " at n=" +
                                    std::to_string(n));
    const double loew = ad_invariance_probe(ConeSpec::loewner(n), 200, ++seed);
    check.require(loew <= 1e-9,
                  "loewner discrepancy " + fmt(loew) + " at n=" + std::to_string(n));
  }
  check.note("200 conjugations per spec and dimension, discrepancy <= 1e-9");
  return check.result;
}

// --------------------------------------------------------------------
// 6. Transported loewner verdict equals the flat PSD verdict.

CriterionResult criterion_loewner_flat_equivalence() {
  Check check;
  const ConeSpec spec = ConeSpec::loewner(3);
  Rng rng(6000);
  int compared = 0, skipped = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SpdPoint s1 = random_spd(rng, 3);
    SpdPoint s2 = random_spd(rng, 3);
    if (trial % 2 == 0) {
      const ConePlacement placement =
          trial % 4 == 0 ? ConePlacement::Boundary : ConePlacement::Interior;
      const OrderedPair pair = sample_ordered_pair(spec, 3, placement, rng);
      s1 = pair.first;
      s2 = pair.second;
    }
    const OrderVerdict transported = spd_order(spec, s1, s2);
    if (std::abs(transported.margins.min_margin()) <= 1e-8) {
      ++skipped;
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s2.mat() - s1.mat());
    const bool flat = es.eigenvalues().minCoeff() >= 0.0;
    check.require(transported.ordered == flat,
                  "transported and flat verdicts disagree at trial " + std::to_string(trial));
    ++compared;
  }
  check.require(compared >= 500, "too few non-boundary pairs compared");
  check.note(std::to_string(compared) + " pairs agree, " + std::to_string(skipped) +
             " boundary pairs excluded");
  return check.result;
}

// --------------------------------------------------------------------
// 7. Partial-order axioms hold statistically.

CriterionResult criterion_order_axioms() {
  Check check;
  std::uint64_t seed = 7000;
  for (const ConeSpec& spec :
       {ConeSpec::loewner(3), ConeSpec::quadratic(0.5, 3), ConeSpec::quadratic(1.0, 3)}) {
    const AxiomReport report = order_axiom_probe(spec, 3, 500, ++seed);
    std::ostringstream label;
    label << spec.describe() << ": " << report.reflexive_failures << "/"
          << report.transitive_failures << "/" << report.antisymmetry_failures
          << " axiom failures";
    check.require(report.reflexive_failures == 0 && report.transitive_failures == 0 &&
                      report.antisymmetry_failures == 0,
                  label.str());
  }
  check.note("500 trials per spec, zero reflexive/transitive/antisymmetry failures");
  return check.result;
}

// Shared run for criteria 8 and 9.
struct ConsensusRun {
  OscillatorNetwork net;
  Trajectory traj;
};

const ConsensusRun& locked_ring_run() {
  static const ConsensusRun run = [] {
    const int n = 10;
    Rng rng(8000);
    Vector omega(n), theta0(n);
    for (int i = 0; i < n; ++i) omega[i] = rng.uniform(-0.2, 0.2);
    for (int i = 0; i < n; ++i) theta0[i] = rng.uniform(-0.6, 0.6);
    std::vector<Edge> edges = ring_edges(n, CouplingKind::BarrierTan, 1.0);
    add_bidirectional_edge(edges, 0, 5, CouplingKind::BarrierTan, 1.0);
    add_bidirectional_edge(edges, 2, 7, CouplingKind::BarrierTan, 1.0);
    OscillatorNetwork net(n, edges, omega);
    Trajectory traj = simulate(net, theta0, 200.0, 1e-2);
    return ConsensusRun{std::move(net), std::move(traj)};
  }();
  return run;
}

// --------------------------------------------------------------------
// 8. The ring-with-chords network phase-locks.

CriterionResult criterion_phase_locking() {
  Check check;
  const ConsensusRun& run = locked_ring_run();

  const PhaseLockReport report = phase_lock_detect(run.traj, 20.0, 1e-6);
  check.require(report.locked, "network failed to lock by T=200");
  const Vector& final_freq = run.traj.derivs.back();
  const double spread = final_freq.maxCoeff() - final_freq.minCoeff();
  check.require(spread < 1e-6, "frequency spread " + fmt(spread));

  for (const Vector& state : run.traj.states) {
    for (const Edge& e : run.net.edges()) {
      const double gap = std::abs(wrap_angle(state[e.neighbor] - state[e.agent]));
      check.require(gap < kPi, "forward invariance violated, gap " + fmt(gap));
    }
  }

  // Two-agent analytic gap against the bisection oracle for tan(d) = 0.1.
  std::vector<Edge> pair_edges;
  add_bidirectional_edge(pair_edges, 0, 1, CouplingKind::BarrierTan, 1.0);
  Vector pair_omega(2);
  pair_omega << 0.1, -0.1;
  const OscillatorNetwork pair_net(2, pair_edges, pair_omega);
  const Trajectory pair_traj = simulate(pair_net, Vector::Zero(2), 30.0, 1e-2);
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    (std::tan(mid) - 0.1 > 0.0 ? hi : lo) = mid;
  }
  const double oracle_gap = lo + hi;  // 2 * root
  const double gap = pair_traj.final_state()[0] - pair_traj.final_state()[1];
  check.require(std::abs(gap - oracle_gap) <= 1e-6,
                "two-agent gap " + fmt(gap) + " vs oracle " + fmt(oracle_gap));

  check.note("locked with frequency spread " + fmt(spread) + ", two-agent gap matches");
  return check.result;
}

// --------------------------------------------------------------------
// 9. Cone contraction and dominant-direction alignment on that run.

CriterionResult criterion_contraction_dominance() {
  Check check;
  const ConsensusRun& run = locked_ring_run();
  const VariationalFlow flow = variational(run.net, run.traj);

  const ContractionReport contraction = contraction_report(flow, 1.0);
  check.require(contraction.strictly_positive, "window transition has nonpositive entries");
  check.require(contraction.birkhoff_ratio < 1.0,
                "birkhoff ratio " + fmt(contraction.birkhoff_ratio));

  const Vector ones = Vector::Ones(run.net.size());
  for (const Matrix& psi : flow.fundamental_matrices()) {
    const double drift = (psi * ones - ones).cwiseAbs().maxCoeff();
    check.require(drift <= 1e-8, "ones-invariant drift " + fmt(drift));
  }

  Rng rng(9000);
  const double horizon = run.traj.horizon();
  int decayed = 0;
  for (int k = 0; k < 20; ++k) {
    Vector v(run.net.size());
    for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(0.05, 1.0);
    check.require(phi_ratio(flow, v, horizon) < 1e-6,
                  "phi ratio did not decay for vector " + std::to_string(k));
    double previous = phi_ratio(flow, v, 0.5 * horizon);
    for (double t = 0.5 * horizon + 1.0; t <= horizon + 1e-9; t += 1.0) {
      const double current = phi_ratio(flow, v, t);
      check.require(current <= previous + 1e-9,
                    "phi ratio increased at t=" + fmt(t) + " for vector " + std::to_string(k));
      previous = current;
    }
    ++decayed;
  }
  check.note("birkhoff ratio " + fmt(contraction.birkhoff_ratio) + ", " +
             std::to_string(decayed) + " orthant vectors decayed below 1e-6");
  return check.result;
}

// --------------------------------------------------------------------
// 10. Rank-k cone dichotomy and an inside subspace.

CriterionResult criterion_rankk() {
  Check check;
  Matrix p = Matrix::Zero(3, 3);
  p.diagonal() << 1.0, 1.0, -1.0;
  const SymMatrix pk(p);
  const SymMatrix nk(-p);
  check.require(ConeSpec::rankk(pk).rank() == 2, "rank of diag(1,1,-1) cone is not 2");
  check.require(ConeSpec::rankk(nk).rank() == 1, "rank of the complement cone is not 1");

  Rng rng(10000);
  for (int trial = 0; trial < 10000; ++trial) {
    const Vector v = random_vector(rng, 3);
    check.require(rankk_margin(pk, v).member || rankk_margin(nk, v).member,
                  "dichotomy failed at trial " + std::to_string(trial));
  }

  // A tilted plane that stays inside the rank-2 cone: spanned by
  // (cos a, 0, sin a) with a < pi/4 and (0, 1, 0).
  const double tilt = rng.uniform(0.0, kPi / 4.0 - 0.05);
  Vector u1(3), u2(3);
  u1 << std::cos(tilt), 0.0, std::sin(tilt);
  u2 << 0.0, 1.0, 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector v = rng.gaussian() * u1 + rng.gaussian() * u2;
    check.require(rankk_margin(pk, v).min_margin() >= -1e-10,
                  "subspace element left the cone at trial " + std::to_string(trial));
  }
  check.note("dichotomy on 10^4 vectors; tilted plane (tilt " + fmt(tilt) + ") inside");
  return check.result;
}

// --------------------------------------------------------------------
// 11. Heisenberg quotient order invariance.

CriterionResult criterion_heisenberg() {
  Check check;
  const ConeSpec cone = ConeSpec::planar({1.0, 0.0}, {0.3, 1.0});
  Rng rng(11000);
  for (int trial = 0; trial < 100; ++trial) {
    const HeisenbergElement g1{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const HeisenbergElement g2{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const HeisenbergElement h{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const bool base = heisenberg_order(cone, g1, g2).ordered;
    const bool moved =
        heisenberg_order(cone, heisenberg_mul(h, g1), heisenberg_mul(h, g2)).ordered;
    check.require(base == moved,
                  "left translation changed the verdict at trial " + std::to_string(trial));
  }

  for (int trial = 0; trial < 100; ++trial) {
    const double a = rng.gaussian(), b = rng.gaussian();
    const HeisenbergElement g1{a, b, rng.gaussian()};
    const HeisenbergElement g2{a, b, rng.gaussian()};
    const OrderVerdict forward = heisenberg_order(cone, g1, g2);
    const OrderVerdict backward = heisenberg_order(cone, g2, g1);
    check.require(forward.ordered && backward.ordered,
                  "same-coset elements are not mutually ordered");
    check.require(forward.margins.min_margin() == 0.0 &&
                      backward.margins.min_margin() == 0.0,
                  "same-coset margins are not exactly zero");
  }
  check.note("100 left translations and 100 coset pairs clean");
  return check.result;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<CriterionResult()>>> criteria = {
      {"1 generalized loewner-heinz, r in [0,1] monotone", criterion_loewner_heinz_monotone},
      {"2 counterexamples for r > 1", criterion_counterexamples},
      {"3 geodesic vs spectral order equivalence", criterion_geodesic_equivalence},
      {"4 metric congruence invariance and inversion isometry", criterion_metric_invariance},
      {"5 ad-invariance of base cones", criterion_ad_invariance},
      {"6 loewner transported vs flat PSD verdicts", criterion_loewner_flat_equivalence},
      {"7 partial-order axiom probe", criterion_order_axioms},
      {"8 consensus phase-locking", criterion_phase_locking},
      {"9 cone contraction and phi-ratio dominance", criterion_contraction_dominance},
      {"10 rank-k cone dichotomy and inside subspace", criterion_rankk},
      {"11 heisenberg quotient order invariance", criterion_heisenberg},
  };

  int failures = 0;
  for (const auto& [name, body] : criteria) {
    CriterionResult result;
    try {
      result = body();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %s%s%s\n", result.pass ? "PASS" : "FAIL", name.c_str(),
                result.detail.empty() ? "" : " -- ", result.detail.c_str());
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
