#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Closed-form and numerically optimized ceilings on the success probability
// of the distributed discrimination game, as a function of the energy budget
// omega and the entanglement structure of the shared state.

namespace dsd {

/// Grouping of n parties into unordered blocks; a state respecting it is a
/// tensor product of factors, one per block. Sizes are stored non-increasing.
class PartitionSpec {
 public:
  explicit PartitionSpec(std::vector<int> group_sizes);

  const std::vector<int>& group_sizes() const { return sizes_; }
  int n() const { return n_; }
  int groups() const { return static_cast<int>(sizes_.size()); }
  int max_group() const { return sizes_.front(); }
  /// Sizes ascending, joined with '|': {3, 1} renders as "1|3".
  std::string label() const;

  bool operator==(const PartitionSpec& other) const {
    return sizes_ == other.sizes_;
  }
  bool operator!=(const PartitionSpec& other) const {
    return !(*this == other);
  }

 private:
  std::vector<int> sizes_;
  int n_;
};

/// All integer partitions of n, ordered by group count ascending, then by
/// the size list (non-increasing within each partition) lexicographically
/// descending. First is {n}, last is {1,...,1}. Requires n <= 12.
std::vector<PartitionSpec> all_partitions(int n);
/// The subset of all_partitions(n) whose largest block is at most d.
std::vector<PartitionSpec> partitions_with_max_group(int n, int d);

/// Optimal success probability for discriminating 2^k equiprobable pure
/// states under vacuum-weight constraint 1 - omega, dimension-free form:
/// ((sqrt(omega (k-1)) + sqrt(1 - omega))^2) / k below saturation, and
/// exactly 1 for omega >= 1 - 1/k. `n_states` is k.
double p_sd(double omega, int n_states);

/// Ceiling for an unrestricted (possibly genuinely n-party entangled)
/// shared state: p_sd with k = 2^n.
double p_ent(double omega, int n_parties);

/// Ceiling for fully separable shared states:
/// (1/2 + sqrt(v) sqrt(1 - v))^n with v = (1 - omega)^(1/n) below
/// saturation, exactly 1 for omega >= 1 - 2^-n.
double p_sep(double omega, int n_parties);

/// Energy interval consistent with an observed success probability p_s in
/// the k-state game: both roots of the inverted success bound.
struct GBounds {
  double g_minus;
  double g_plus;
};
GBounds g_bounds(double p_s, int n_states);

/// Critical visibility above which isotropic noise on the optimal
/// entangled strategy still beats every separable strategy.
double nu_crit(double omega, int n_parties);

struct PartitionBoundResult {
  double value;
  /// Optimal per-block energies, aligned with group_sizes().
  std::vector<double> energies;
  /// Whether all random restarts agreed on the value within 1e-9.
  bool restarts_agree;
};

/// Ceiling for states that are tensor products across the given partition:
/// maximize the product of per-block ceilings over block energies
/// consistent with the global budget omega.
PartitionBoundResult partition_bound(double omega, const PartitionSpec& spec);

/// Map from entanglement depth d (largest block size) to the best bound
/// achievable with blocks of size at most d, for d = 1..n.
std::map<int, double> depth_bound_table(double omega, int n);

}  // namespace dsd
