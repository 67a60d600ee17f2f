#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "conal/errors.hpp"
#include "conal/symmat.hpp"

namespace conal {

enum class CouplingKind { BarrierTan, Sine };

// One directed interaction: `agent` listens to `neighbor`, contributing
// mu(theta_neighbor - theta_agent) to the agent's phase velocity.
struct Edge {
  int agent;
  int neighbor;
  CouplingKind coupling = CouplingKind::BarrierTan;
  double gain = 1.0;
};

// Coupling function value and slope at a (wrapped) phase gap.  BarrierTan
// is g tan(alpha/2): odd, zero at zero, diverging at the +-pi pole.  Sine
// is g sin(alpha), with no pole.
struct CouplingValue {
  double value;
  double derivative;
};

CouplingValue coupling_eval(CouplingKind kind, double gain, double alpha);

// Which gap the coupling sees: attractive passes (theta_neighbor -
// theta_agent), giving a Metzler linearization; repulsive flips the sign.
enum class InteractionSign { Attractive, Repulsive };

// Directed oscillator network on the N-torus.  The interaction digraph
// must be strongly connected; barrier couplings need positive gain, sine
// couplings may be inert (gain zero).
class OscillatorNetwork {
 public:
  OscillatorNetwork(int n, std::vector<Edge> edges, Vector omega,
                    InteractionSign sign = InteractionSign::Attractive);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vector& omega() const { return omega_; }
  InteractionSign sign() const { return sign_; }
  bool has_barrier() const { return has_barrier_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  Vector omega_;
  InteractionSign sign_;
  bool has_barrier_;
};

// Bidirectional ring 0-1-...-(n-1)-0.
std::vector<Edge> ring_edges(int n, CouplingKind kind, double gain);

void add_bidirectional_edge(std::vector<Edge>& edges, int a, int b, CouplingKind kind,
                            double gain);

// Wrap a covering-space difference to (-pi, pi].
double wrap_angle(double x);

// Phase velocities theta_dot_k = omega_k + sum_{(k,i)} mu_ki(gap).
Vector rhs(const OscillatorNetwork& net, const Vector& theta);

// Jacobian A(theta) of rhs: nonnegative off-diagonals on edges (for the
// attractive sign), diagonal the negative row sum, so A * ones = 0.
Matrix linearization(const OscillatorNetwork& net, const Vector& theta);

// States in the covering space, with the phase velocity at each sample.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> derivs;

  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  const Vector& final_state() const { return states.back(); }
};

// Classical fixed-step 4th-order integration in the covering space.
// Proximity of a barrier edge gap to pi rejects the step and retries at
// half the size down to dt_min; running out of headroom raises
// IntegrationError carrying the time and edge.
Trajectory simulate(const OscillatorNetwork& net, const Vector& theta0, double horizon,
                    double dt, double dt_min = 1e-5);

// Fundamental matrices Psi(t) of the linearized flow along a trajectory,
// advanced with the same stepper and stage states as the underlying run.
// The invariant Psi * ones = ones is checked at every step, not enforced.
class VariationalFlow {
 public:
  VariationalFlow(OscillatorNetwork net, Trajectory traj);

  const std::vector<double>& times() const { return traj_.times; }
  const std::vector<Matrix>& fundamental_matrices() const { return psis_; }
  const Trajectory& trajectory() const { return traj_; }
  const OscillatorNetwork& network() const { return net_; }

  // Psi at the stored sample nearest to t.
  const Matrix& at(double t) const;

  // Transition matrix over [t0, t1] restarted from the identity at the
  // stored sample nearest t0 (never by inverting a stored Psi).
  Matrix transition(double t0, double t1) const;

 private:
  std::size_t index_near(double t) const;

  OscillatorNetwork net_;
  Trajectory traj_;
  std::vector<Matrix> psis_;
};

inline VariationalFlow variational(const OscillatorNetwork& net, const Trajectory& traj) {
  return VariationalFlow(net, traj);
}

// Projective contraction diagnostics of the transition matrix over the
// trailing window of length tau: entrywise positivity, Hilbert projective
// diameter, and the Birkhoff ratio tanh(diameter/4) (< 1 certifies strict
// contraction of the orthant).
struct ContractionReport {
  bool strictly_positive;
  double hilbert_diameter;
  double birkhoff_ratio;
  double window;
};

ContractionReport contraction_report(const VariationalFlow& flow, double tau);

// Hilbert projective diameter of an entrywise-positive matrix:
// max over index pairs of log(M_ik M_jl / (M_jk M_il)); infinite if any
// entry is nonpositive.
double hilbert_diameter(const Matrix& m);

// Ratio of the component of Psi(t) v orthogonal to ones over the
// component along ones; decay certifies alignment with the dominant
// direction.  v must have a nonzero ones-component.
double phi_ratio(const VariationalFlow& flow, const Vector& v, double t);

struct PhaseLockReport {
  bool locked;
  double sync_frequency;
  Vector asymptotic_gaps;  // final wrapped gaps relative to agent 0
};

// Locked iff over the trailing window every pairwise gap has
// peak-to-peak variation below tol and all instantaneous frequencies
// agree within tol.
PhaseLockReport phase_lock_detect(const Trajectory& traj, double window, double tol);

// CSV export with header t,theta_1,...,theta_N and round-trip-exact
// floats.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace conal
