#pragma once

#include <vector>

#include "dsd/qcore.hpp"

// The discrimination game itself: a referee draws an n-bit message
// uniformly, hands the parties the matching signal state, and each party
// announces one bit from a local two-outcome measurement. Success means
// every party recovers its own bit.

namespace dsd {

/// A complete strategy: one shared n-party state per message (indexed by
/// the message integer, party 0 most significant) plus one single-qubit
/// measurement per party.
struct Strategy {
  std::vector<PureState> states;
  std::vector<BinaryMeasurement> measurements;

  Strategy(std::vector<PureState> signal_states,
           std::vector<BinaryMeasurement> local_measurements);

  int n_parties() const { return static_cast<int>(measurements.size()); }
};

/// Isotropic noise: the shared state reaches the parties intact with
/// probability `visibility` and is replaced by the maximally mixed state
/// otherwise.
struct NoiseModel {
  double visibility;
  explicit NoiseModel(double nu);
};

/// Average probability that all parties announce their own bit, computed
/// from the Born rule.
double born_success(const Strategy& strategy);

/// born_success under isotropic noise, computed exactly: the mixed-state
/// term contributes the product of local element traces over 2^n.
double noisy_success(const Strategy& strategy, const NoiseModel& noise);

struct ScanAResult {
  double a_star;
  double p_star;
};

/// Sweep the single-excitation weight of the two-party adjustable signal
/// family over [0, omega/2] (grid pass plus golden-section refinement to
/// width 1e-9) and report the best weight and its success probability.
ScanAResult scan_a(double omega, int grid = 1000);

}  // namespace dsd
