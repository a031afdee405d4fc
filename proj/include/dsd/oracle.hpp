#pragma once

#include <cstdint>
#include <vector>

#include "dsd/bounds.hpp"
#include "dsd/game.hpp"
#include "dsd/qcore.hpp"

// Numerical optimizer that searches for good strategies directly, without
// assuming the closed-form constructions: alternating (see-saw) ascent
// over signal states and local measurements under the energy constraint.
// Used to confirm that the analytic ceilings are actually reachable.

namespace dsd {

/// Best energy-feasible state for a fixed positive score operator:
/// maximize <psi|score|psi> subject to vacuum weight >= 1 - omega.
/// Solved by eigendecomposition when the unconstrained top eigenvector is
/// feasible, otherwise by bisection on the vacuum-projector multiplier
/// (with exact tuning inside degenerate top eigenspaces and a projected
/// ascent fallback if bracketing fails).
PureState optimal_state_given_measurements(const HermitianOp& score_op,
                                           double omega);

/// Best two-outcome measurement for fixed effective score operators, one
/// per outcome: outcome 0 projects onto the strictly positive eigenspace
/// of eff0 - eff1, ties and kernel go to outcome 1.
BinaryMeasurement optimal_measurement_given_states(const HermitianOp& eff0,
                                                   const HermitianOp& eff1);

struct SeesawConfig {
  int n;
  double omega;
  /// Tensor-product structure imposed on the signal states.
  PartitionSpec structure;
  int restarts = 16;
  int max_iters = 400;
  /// Stop a restart once the relative improvement per sweep drops below this.
  double tol = 1e-9;
  std::uint64_t seed = 1;

  SeesawConfig(int n_parties, double omega_total, PartitionSpec split);
};

struct SeesawReport {
  double best_value = 0.0;
  std::vector<double> per_restart_values;
  bool converged = false;
  int iterations_used = 0;
  /// Objective after each sweep of the winning restart.
  std::vector<double> best_trace;
  /// Winning strategy, assembled into full-space signal states.
  std::vector<PureState> best_states;
  std::vector<BinaryMeasurement> best_measurements;
};

/// Run the alternating optimization from several random starts and keep
/// the best strategy found. Deterministic for a fixed seed.
SeesawReport seesaw(const SeesawConfig& config);

}  // namespace dsd
