#include "conal/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace conal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBarrierGuard = 1e-9;  // gaps must stay below pi - guard

// Internal rejection signal while attempting an integration step.
struct BarrierBreach {
  int agent;
  int neighbor;
  double gap;
};

double signed_gap(const OscillatorNetwork& net, const Vector& theta, const Edge& e) {
  const double raw = theta[e.neighbor] - theta[e.agent];
  const double gap = wrap_angle(raw);
  return net.sign() == InteractionSign::Attractive ? gap : -gap;
}

// rhs with an explicit barrier limit; gaps at or past the limit throw the
// internal breach marker so the stepper can back off.
Vector rhs_limited(const OscillatorNetwork& net, const Vector& theta, double limit) {
  Vector out = net.omega();
  for (const Edge& e : net.edges()) {
    const double alpha = signed_gap(net, theta, e);
    if (e.coupling == CouplingKind::BarrierTan && std::abs(alpha) >= limit) {
      throw BarrierBreach{e.agent, e.neighbor, alpha};
    }
    out[e.agent] += coupling_eval(e.coupling, e.gain, alpha).value;
  }
  return out;
}

Matrix linearization_limited(const OscillatorNetwork& net, const Vector& theta, double limit) {
  const int n = net.size();
  Matrix a = Matrix::Zero(n, n);
  for (const Edge& e : net.edges()) {
    const double alpha = signed_gap(net, theta, e);
    if (e.coupling == CouplingKind::BarrierTan && std::abs(alpha) >= limit) {
      throw BarrierBreach{e.agent, e.neighbor, alpha};
    }
    const double slope = coupling_eval(e.coupling, e.gain, alpha).derivative;
    // d/d(theta_neighbor) of mu(signed gap): +slope when attractive,
    // -slope when repulsive; the diagonal takes the opposite sign so the
    // row sum is exactly zero.
    const double s = net.sign() == InteractionSign::Attractive ? slope : -slope;
    a(e.agent, e.neighbor) += s;
    a(e.agent, e.agent) -= s;
  }
  return a;
}

// One classical 4th-order step of the state and, when psi is non-null, of
// the fundamental matrix along the same stage states.  The state
// arithmetic is identical whether or not psi is advanced.
void rk4_step(const OscillatorNetwork& net, double dt, double limit, Vector& theta,
              Matrix* psi) {
  const Vector k1 = rhs_limited(net, theta, limit);
  const Vector s2 = theta + (0.5 * dt) * k1;
  const Vector k2 = rhs_limited(net, s2, limit);
  const Vector s3 = theta + (0.5 * dt) * k2;
  const Vector k3 = rhs_limited(net, s3, limit);
  const Vector s4 = theta + dt * k3;
  const Vector k4 = rhs_limited(net, s4, limit);
  if (psi != nullptr) {
    const Matrix a1 = linearization_limited(net, theta, limit);
    const Matrix m1 = a1 * (*psi);
    const Matrix a2 = linearization_limited(net, s2, limit);
    const Matrix m2 = a2 * (*psi + (0.5 * dt) * m1);
    const Matrix a3 = linearization_limited(net, s3, limit);
    const Matrix m3 = a3 * (*psi + (0.5 * dt) * m2);
    const Matrix a4 = linearization_limited(net, s4, limit);
    const Matrix m4 = a4 * (*psi + dt * m3);
    *psi += (dt / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
  }
  theta += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Branch index of a raw covering-space difference: which 2 pi window the
// gap sits in.  The true flow keeps barrier gaps inside one branch, so a
// change across a step means the integrator jumped the pole.
long branch_index(double raw_gap) { return std::lround(raw_gap / (2.0 * kPi)); }

// Post-step barrier check on the accepted state: proximity to the pole
// and pole crossings relative to the pre-step state both reject.
void check_state_gaps(const OscillatorNetwork& net, const Vector& before,
                      const Vector& after, double limit) {
  for (const Edge& e : net.edges()) {
    if (e.coupling != CouplingKind::BarrierTan) continue;
    const double raw_before = before[e.neighbor] - before[e.agent];
    const double raw_after = after[e.neighbor] - after[e.agent];
    const double gap = wrap_angle(raw_after);
    if (std::abs(gap) >= limit || branch_index(raw_after) != branch_index(raw_before)) {
      throw BarrierBreach{e.agent, e.neighbor, gap};
    }
  }
}

}  // namespace

CouplingValue coupling_eval(CouplingKind kind, double gain, double alpha) {
  switch (kind) {
    case CouplingKind::BarrierTan: {
      if (std::abs(alpha) >= kPi) {
        std::ostringstream msg;
        msg << "coupling_eval: barrier coupling needs |alpha| < pi, got " << alpha;
        throw DomainError(msg.str());
      }
      const double c = std::cos(0.5 * alpha);
      return CouplingValue{gain * std::tan(0.5 * alpha), 0.5 * gain / (c * c)};
    }
    case CouplingKind::Sine:
      return CouplingValue{gain * std::sin(alpha), gain * std::cos(alpha)};
  }
  throw std::logic_error("coupling_eval: unreachable");
}

OscillatorNetwork::OscillatorNetwork(int n, std::vector<Edge> edges, Vector omega,
                                     InteractionSign sign)
    : n_(n), edges_(std::move(edges)), omega_(std::move(omega)), sign_(sign) {
  if (n_ < 1) throw ValidationError("OscillatorNetwork: need at least one agent");
  if (omega_.size() != n_) {
    throw ValidationError("OscillatorNetwork: omega length does not match agent count");
  }
  if (!omega_.allFinite()) throw ValidationError("OscillatorNetwork: non-finite omega");
  has_barrier_ = false;
  for (const Edge& e : edges_) {
    if (e.agent < 0 || e.agent >= n_ || e.neighbor < 0 || e.neighbor >= n_) {
      throw ValidationError("OscillatorNetwork: edge endpoint out of range");
    }
    if (e.agent == e.neighbor) throw ValidationError("OscillatorNetwork: self-loop edge");
    if (e.coupling == CouplingKind::BarrierTan) {
      if (!(e.gain > 0.0)) {
        throw ValidationError("OscillatorNetwork: barrier coupling gain must be positive");
      }
      has_barrier_ = true;
    } else if (e.gain < 0.0) {
      throw ValidationError("OscillatorNetwork: coupling gain must be nonnegative");
    }
  }
  // Strong connectivity: every agent reachable along edges and along
  // reversed edges from agent 0.
  if (n_ > 1) {
    auto reach = [&](bool reversed) {
      std::vector<char> seen(n_, 0);
      std::vector<int> stack{0};
      seen[0] = 1;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const Edge& e : edges_) {
          const int from = reversed ? e.neighbor : e.agent;
          const int to = reversed ? e.agent : e.neighbor;
          if (from == v && !seen[to]) {
            seen[to] = 1;
            stack.push_back(to);
          }
        }
      }
      return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    if (!reach(false) || !reach(true)) {
      throw ValidationError("OscillatorNetwork: interaction digraph is not strongly connected");
    }
  }
}

std::vector<Edge> ring_edges(int n, CouplingKind kind, double gain) {
  if (n < 2) throw ValidationError("ring_edges: need at least two agents");
  std::vector<Edge> edges;
  // A two-agent ring collapses to a single bidirectional edge.
  const int distinct = n == 2 ? 1 : n;
  for (int k = 0; k < distinct; ++k) {
    add_bidirectional_edge(edges, k, (k + 1) % n, kind, gain);
  }
  return edges;
}

void add_bidirectional_edge(std::vector<Edge>& edges, int a, int b, CouplingKind kind,
                            double gain) {
  edges.push_back(Edge{a, b, kind, gain});
  edges.push_back(Edge{b, a, kind, gain});
}

double wrap_angle(double x) {
  double w = std::remainder(x, 2.0 * kPi);  // (-pi, pi], with -pi mapped below
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

Vector rhs(const OscillatorNetwork& net, const Vector& theta) {
  if (theta.size() != net.size()) throw ValidationError("rhs: state size mismatch");
  try {
    return rhs_limited(net, theta, kPi);
  } catch (const BarrierBreach& b) {
    std::ostringstream msg;
    msg << "rhs: barrier edge (" << b.agent << ", " << b.neighbor << ") gap " << b.gap
        << " is outside (-pi, pi)";
    throw DomainError(msg.str());
  }
}

Matrix linearization(const OscillatorNetwork& net, const Vector& theta) {
  if (theta.size() != net.size()) throw ValidationError("linearization: state size mismatch");
  try {
    return linearization_limited(net, theta, kPi);
  } catch (const BarrierBreach& b) {
    std::ostringstream msg;
    msg << "linearization: barrier edge (" << b.agent << ", " << b.neighbor << ") gap "
        << b.gap << " is outside (-pi, pi)";
    throw DomainError(msg.str());
  }
}

Trajectory simulate(const OscillatorNetwork& net, const Vector& theta0, double horizon,
                    double dt, double dt_min) {
  if (theta0.size() != net.size()) throw ValidationError("simulate: state size mismatch");
  if (!theta0.allFinite()) throw ValidationError("simulate: non-finite initial state");
  if (!(horizon > 0.0) || !(dt > 0.0) || !(dt_min > 0.0)) {
    throw ValidationError("simulate: horizon, dt and dt_min must be positive");
  }
  // Strict initial margin on barrier edges.
  for (const Edge& e : net.edges()) {
    if (e.coupling != CouplingKind::BarrierTan) continue;
    const double gap = wrap_angle(theta0[e.neighbor] - theta0[e.agent]);
    if (std::abs(gap) >= kPi - 1e-6) {
      std::ostringstream msg;
      msg << "simulate: initial gap " << gap << " on barrier edge (" << e.agent << ", "
          << e.neighbor << ") is too close to pi";
      throw DomainError(msg.str());
    }
  }

  const double limit = kPi - kBarrierGuard;
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(theta0);
  traj.derivs.push_back(rhs(net, theta0));

  double t = 0.0;
  Vector theta = theta0;
  while (t < horizon - 1e-12) {
    double step = std::min(dt, horizon - t);
    // Each nominal step starts at full size and halves on barrier
    // proximity; the subdivided pieces are recorded like any other step.
    for (;;) {
      Vector candidate = theta;
      try {
        rk4_step(net, step, limit, candidate, nullptr);
        check_state_gaps(net, theta, candidate, limit);
      } catch (const BarrierBreach& b) {
        step *= 0.5;
        if (step < dt_min) {
          std::ostringstream msg;
          msg << "simulate: barrier edge (" << b.agent << ", " << b.neighbor
              << ") reached gap " << b.gap << " near t = " << t
              << " and step control ran out of headroom";
          throw IntegrationError(msg.str(), t, b.agent, b.neighbor);
        }
        continue;
      }
      theta = std::move(candidate);
      t += step;
      traj.times.push_back(t);
      traj.states.push_back(theta);
      traj.derivs.push_back(rhs(net, theta));
      break;
    }
  }
  return traj;
}

VariationalFlow::VariationalFlow(OscillatorNetwork net, Trajectory traj)
    : net_(std::move(net)), traj_(std::move(traj)) {
  if (traj_.times.size() < 1 || traj_.times.size() != traj_.states.size()) {
    throw ValidationError("VariationalFlow: malformed trajectory");
  }
  const int n = net_.size();
  const Vector ones = Vector::Ones(n);
  psis_.reserve(traj_.times.size());
  psis_.push_back(Matrix::Identity(n, n));
  Matrix psi = psis_.back();
  for (std::size_t j = 0; j + 1 < traj_.times.size(); ++j) {
    const double dt = traj_.times[j + 1] - traj_.times[j];
    Vector theta = traj_.states[j];
    try {
      rk4_step(net_, dt, kPi - kBarrierGuard, theta, &psi);
    } catch (const BarrierBreach& b) {
      throw IntegrationError("variational: stored trajectory breaches the barrier",
                             traj_.times[j], b.agent, b.neighbor);
    }
    const double drift = (psi * ones - ones).cwiseAbs().maxCoeff();
    if (drift > 1e-8) {
      std::ostringstream msg;
      msg << "variational: fundamental matrix lost the ones-invariant, drift " << drift
          << " at t = " << traj_.times[j + 1];
      throw IntegrationError(msg.str(), traj_.times[j + 1]);
    }
    psis_.push_back(psi);
  }
}

std::size_t VariationalFlow::index_near(double t) const {
  const auto it = std::lower_bound(traj_.times.begin(), traj_.times.end(), t);
  if (it == traj_.times.begin()) return 0;
  if (it == traj_.times.end()) return traj_.times.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - traj_.times.begin());
  return (t - traj_.times[hi - 1] <= traj_.times[hi] - t) ? hi - 1 : hi;
}

const Matrix& VariationalFlow::at(double t) const { return psis_[index_near(t)]; }

Matrix VariationalFlow::transition(double t0, double t1) const {
  if (t1 < t0) throw ValidationError("transition: t1 must be >= t0");
  const std::size_t j0 = index_near(t0);
  const std::size_t j1 = index_near(t1);
  const int n = net_.size();
  Matrix psi = Matrix::Identity(n, n);
  for (std::size_t j = j0; j < j1; ++j) {
    const double dt = traj_.times[j + 1] - traj_.times[j];
    Vector theta = traj_.states[j];
    rk4_step(net_, dt, kPi - kBarrierGuard, theta, &psi);
  }
  return psi;
}

double hilbert_diameter(const Matrix& m) {
  if ((m.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(m.rows());
  double diameter = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double max_ratio_ij = 0.0;  // max_k M_ik / M_jk
      double max_ratio_ji = 0.0;  // max_l M_jl / M_il
      for (int k = 0; k < n; ++k) {
        max_ratio_ij = std::max(max_ratio_ij, m(i, k) / m(j, k));
        max_ratio_ji = std::max(max_ratio_ji, m(j, k) / m(i, k));
      }
      diameter = std::max(diameter, std::log(max_ratio_ij * max_ratio_ji));
    }
  }
  return diameter;
}

ContractionReport contraction_report(const VariationalFlow& flow, double tau) {
  const double horizon = flow.times().back();
  if (!(tau > 0.0) || tau > horizon + 1e-12) {
    throw ValidationError("contraction_report: window must lie within the trajectory");
  }
  const Matrix m = flow.transition(horizon - tau, horizon);
  ContractionReport report;
  report.window = tau;
  report.strictly_positive = (m.array() > 0.0).all();
  report.hilbert_diameter = hilbert_diameter(m);
  report.birkhoff_ratio =
      std::isfinite(report.hilbert_diameter) ? std::tanh(0.25 * report.hilbert_diameter) : 1.0;
  return report;
}

double phi_ratio(const VariationalFlow& flow, const Vector& v, double t) {
  const int n = flow.network().size();
  if (v.size() != n) throw ValidationError("phi_ratio: vector size mismatch");
  const Vector ones = Vector::Ones(n);
  if (std::abs(ones.dot(v)) <= 1e-12 * std::sqrt(static_cast<double>(n)) * v.norm()) {
    throw DomainError("phi_ratio: vector has no component along the dominant direction");
  }
  const Vector w = flow.at(t) * v;
  const double along = ones.dot(w) / n;
  const Vector dominant = along * ones;
  const Vector transverse = w - dominant;
  return transverse.norm() / dominant.norm();
}

PhaseLockReport phase_lock_detect(const Trajectory& traj, double window, double tol) {
  if (traj.times.size() < 2) throw ValidationError("phase_lock_detect: trajectory too short");
  const double horizon = traj.horizon();
  if (!(window > 0.0) || window > horizon + 1e-12) {
    throw ValidationError("phase_lock_detect: window must lie within the horizon");
  }
  const double t_from = horizon - window;
  std::size_t start = 0;
  while (start + 1 < traj.times.size() && traj.times[start] < t_from - 1e-12) ++start;

  const int n = static_cast<int>(traj.states.front().size());
  bool locked = true;

  // Peak-to-peak variation of every pairwise gap over the window.
  for (int k = 0; k < n && locked; ++k) {
    for (int l = k + 1; l < n && locked; ++l) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t j = start; j < traj.states.size(); ++j) {
        const double gap = traj.states[j][k] - traj.states[j][l];
        lo = std::min(lo, gap);
        hi = std::max(hi, gap);
      }
      if (hi - lo >= tol) locked = false;
    }
  }

  // Instantaneous frequency agreement and window mean.
  double freq_sum = 0.0;
  std::size_t freq_count = 0;
  for (std::size_t j = start; j < traj.derivs.size(); ++j) {
    const double spread = traj.derivs[j].maxCoeff() - traj.derivs[j].minCoeff();
    if (spread >= tol) locked = false;
    freq_sum += traj.derivs[j].sum();
    freq_count += n;
  }

  PhaseLockReport report;
  report.locked = locked;
  report.sync_frequency = freq_sum / static_cast<double>(freq_count);
  report.asymptotic_gaps = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    report.asymptotic_gaps[k] = wrap_angle(traj.final_state()[k] - traj.final_state()[0]);
  }
  return report;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
  out << "t";
  for (int k = 1; k <= n; ++k) out << ",theta_" << k;
  out << "\n";
  out.precision(17);
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    out << traj.times[j];
    for (int k = 0; k < n; ++k) out << "," << traj.states[j][k];
    out << "\n";
  }
}

}  // namespace conal
