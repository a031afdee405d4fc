#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dsd/bounds.hpp"

// Turn an observed success probability into statements about the shared
// state: which tensor-product structures it cannot have had, a lower bound
// on its entanglement depth, and whether it must have been genuinely
// multipartite entangled.

namespace dsd {

/// Observation exceeds the unrestricted ceiling: no state at this energy
/// can produce it, so the inputs are inconsistent.
class InconsistentObservationError : public std::runtime_error {
 public:
  explicit InconsistentObservationError(const std::string& what)
      : std::runtime_error(what) {}
};

struct CertVerdict {
  int n = 0;
  double omega = 0.0;
  double observed_ps = 0.0;
  /// Partitions whose ceiling the observation strictly beats, with the
  /// ceiling values; states with any of these structures are ruled out.
  std::vector<std::pair<PartitionSpec, double>> excluded_partitions;
  /// Smallest entanglement depth consistent with the observation.
  int depth_lower_bound = 1;
  /// True when even depth n-1 is ruled out.
  bool gme = false;
};

/// Compare an observed success probability against every partition ceiling
/// at the given budget. `margin` widens the exclusion threshold: a
/// partition is excluded only if its ceiling is below observed_ps - margin.
CertVerdict certify(int n, double omega, double observed_ps,
                    double margin = 0.0);

/// The full verdict as a JSON document (two-space indent, trailing newline).
std::string verdict_json(const CertVerdict& verdict);

struct BoundCurve {
  /// "ent" for the single-block partition, "sep" for all-singletons,
  /// otherwise the partition label like "1|3".
  std::string label;
  PartitionSpec partition;
  std::vector<double> omegas;
  std::vector<double> values;
};

/// Evaluate partition ceilings over a budget grid. The single-block and
/// all-singleton partitions are always included; duplicates are dropped.
/// Curves come back in canonical partition order.
std::vector<BoundCurve> sweep(int n, const std::vector<double>& omega_grid,
                              const std::vector<PartitionSpec>& partitions);

}  // namespace dsd
