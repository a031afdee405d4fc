#pragma once

#include <vector>

#include "dsd/bounds.hpp"
#include "dsd/qcore.hpp"

// Explicit states and measurements that attain the success ceilings:
// signal states carrying a message in their amplitude signs, and the
// |+>/|-> measurement each party uses to read its bit back out.

namespace dsd {

/// One classical bit per party, party 0 first.
using MessageVector = std::vector<int>;

/// Bits of index, most significant first, as an n-party message.
MessageVector message_from_index(int index, int n_parties);
/// Integer whose binary digits (party 0 most significant) are the message.
int message_index(const MessageVector& message);

/// Shared-state family description: a partition of the parties into blocks
/// plus a per-block energy split consistent with the global budget omega
/// (the off-vacuum weights multiply up: prod(1 - energies[j]) = 1 - omega).
struct StrategySpec {
  int n;
  double omega;
  PartitionSpec partition;
  std::vector<double> energies;

  StrategySpec(int n_parties, double omega_total, PartitionSpec split,
               std::vector<double> block_energies);

  /// Energy split with equal exponents: energies[j] = 1 - (1-omega)^(k_j/n).
  static StrategySpec balanced(int n_parties, double omega_total,
                               PartitionSpec split);
};

/// n-party signal state with vacuum amplitude sqrt(1 - omega) and uniform
/// magnitude sqrt(omega / (2^n - 1)) on every excited basis state, signed
/// by the parity of the overlap between the message and the basis index.
PureState entangled_state(const MessageVector& message, double omega);

/// Two-party signal state with adjustable single-excitation weight a:
/// amplitudes (sqrt(1-omega), s1 sqrt(a), s0 sqrt(a), s0 s1 sqrt(omega-2a))
/// where s_i = (-1)^(bit i). Requires 0 <= a <= omega/2.
PureState bipartite_state(const MessageVector& message, double omega, double a);

/// One single-qubit state per party, (sqrt(v), (-1)^(bit) sqrt(1-v)) with
/// v = (1-omega)^(1/n); their tensor product meets the global budget.
std::vector<PureState> separable_states(const MessageVector& message,
                                        double omega);

/// Tensor product of per-block signal states following the given
/// partition, consuming message bits block by block in partition order.
PureState hybrid_state(const MessageVector& message, const StrategySpec& spec);

/// Single-qubit measurement {|+><+|, |-><-|}; outcome 0 is |+>.
BinaryMeasurement plus_measurement();

/// entangled_state for every message index 0..2^n-1, in index order.
std::vector<PureState> entangled_family(int n_parties, double omega);
/// Tensor products of separable_states for every message index.
std::vector<PureState> separable_family(int n_parties, double omega);
/// hybrid_state for every message index.
std::vector<PureState> hybrid_family(const StrategySpec& spec);

}  // namespace dsd
