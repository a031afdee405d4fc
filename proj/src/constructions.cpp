#include "dsd/constructions.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dsd {

namespace {

void check_omega(double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::domain_error("energy budget must lie in [0, 1], got " +
                            std::to_string(omega));
  }
}

int checked_message_bits(const MessageVector& message) {
  if (message.empty() || message.size() > 30) {
    throw std::invalid_argument("message must have between 1 and 30 bits");
  }
  for (int b : message) {
    if (b != 0 && b != 1) {
      throw std::invalid_argument("message entries must be bits");
    }
  }
  return static_cast<int>(message.size());
}

}  // namespace

MessageVector message_from_index(int index, int n_parties) {
  if (n_parties < 1 || n_parties > 30) {
    throw std::invalid_argument("party count must be in [1, 30]");
  }
  if (index < 0 || index >= (1 << n_parties)) {
    throw std::invalid_argument("message index out of range");
  }
  MessageVector out(static_cast<std::size_t>(n_parties));
  for (int i = 0; i < n_parties; ++i) {
    out[static_cast<std::size_t>(i)] = (index >> (n_parties - 1 - i)) & 1;
  }
  return out;
}

int message_index(const MessageVector& message) {
  const int n = checked_message_bits(message);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    idx = (idx << 1) | message[static_cast<std::size_t>(i)];
  }
  return idx;
}

StrategySpec::StrategySpec(int n_parties, double omega_total,
                           PartitionSpec split,
                           std::vector<double> block_energies)
    : n(n_parties),
      omega(omega_total),
      partition(std::move(split)),
      energies(std::move(block_energies)) {
  check_omega(omega);
  if (partition.n() != n) {
    throw std::invalid_argument("partition does not cover the stated parties");
  }
  if (energies.size() != static_cast<std::size_t>(partition.groups())) {
    throw std::invalid_argument("need one energy per block");
  }
  double residual = 1.0;
  for (double e : energies) {
    check_omega(e);
    residual *= 1.0 - e;
  }
  if (std::abs(residual - (1.0 - omega)) > 1e-9) {
    throw std::invalid_argument(
        "block energies are inconsistent with the global budget (residual "
        "vacuum weight " +
        std::to_string(residual) + " vs " + std::to_string(1.0 - omega) + ")");
  }
}

StrategySpec StrategySpec::balanced(int n_parties, double omega_total,
                                    PartitionSpec split) {
  check_omega(omega_total);
  std::vector<double> energies;
  energies.reserve(static_cast<std::size_t>(split.groups()));
  for (int k : split.group_sizes()) {
    energies.push_back(
        1.0 - std::pow(1.0 - omega_total,
                       static_cast<double>(k) / split.n()));
  }
  return StrategySpec(n_parties, omega_total, std::move(split),
                      std::move(energies));
}

PureState entangled_state(const MessageVector& message, double omega) {
  const int n = checked_message_bits(message);
  check_omega(omega);
  if (n > kMaxExactParties) {
    throw std::invalid_argument("signal states are limited to " +
                                std::to_string(kMaxExactParties) + " parties");
  }
  const int dim = 1 << n;
  const int msg = message_index(message);
  const double excited = std::sqrt(omega / (dim - 1));
  Vector amps(dim);
  amps[0] = std::sqrt(1.0 - omega);
  for (int v = 1; v < dim; ++v) {
    const int parity = std::popcount(static_cast<unsigned>(msg & v)) & 1;
    amps[v] = parity ? -excited : excited;
  }
  return PureState(n, std::move(amps));
}

PureState bipartite_state(const MessageVector& message, double omega,
                          double a) {
  if (message.size() != 2) {
    throw std::invalid_argument("bipartite signal state needs a 2-bit message");
  }
  checked_message_bits(message);
  check_omega(omega);
  if (!(a >= 0.0 && 2.0 * a <= omega + 1e-15)) {
    throw std::domain_error(
        "single-excitation weight must lie in [0, omega/2]");
  }
  const double s0 = message[0] ? -1.0 : 1.0;
  const double s1 = message[1] ? -1.0 : 1.0;
  Vector amps(4);
  amps[0] = std::sqrt(1.0 - omega);
  amps[1] = s1 * std::sqrt(a);
  amps[2] = s0 * std::sqrt(a);
  amps[3] = s0 * s1 * std::sqrt(std::max(0.0, omega - 2.0 * a));
  return PureState(2, std::move(amps));
}

std::vector<PureState> separable_states(const MessageVector& message,
                                        double omega) {
  const int n = checked_message_bits(message);
  check_omega(omega);
  const double v = std::pow(1.0 - omega, 1.0 / n);
  std::vector<PureState> out;
  out.reserve(message.size());
  for (int bit : message) {
    Vector amps(2);
    amps[0] = std::sqrt(v);
    amps[1] = (bit ? -1.0 : 1.0) * std::sqrt(1.0 - v);
    out.emplace_back(1, std::move(amps));
  }
  return out;
}

PureState hybrid_state(const MessageVector& message, const StrategySpec& spec) {
  const int n = checked_message_bits(message);
  if (n != spec.n) {
    throw std::invalid_argument(
        "message length does not match the strategy description");
  }
  std::vector<PureState> blocks;
  blocks.reserve(spec.energies.size());
  std::size_t offset = 0;
  const std::vector<int>& sizes = spec.partition.group_sizes();
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    MessageVector bits(message.begin() + static_cast<std::ptrdiff_t>(offset),
                       message.begin() + static_cast<std::ptrdiff_t>(
                                             offset + sizes[j]));
    blocks.push_back(entangled_state(bits, spec.energies[j]));
    offset += static_cast<std::size_t>(sizes[j]);
  }
  return tensor(blocks);
}

BinaryMeasurement plus_measurement() {
  Matrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  return BinaryMeasurement(HermitianOp(plus), HermitianOp(minus));
}

std::vector<PureState> entangled_family(int n_parties, double omega) {
  const int count = dim_for_parties(n_parties);
  std::vector<PureState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int idx = 0; idx < count; ++idx) {
    out.push_back(entangled_state(message_from_index(idx, n_parties), omega));
  }
  return out;
}

std::vector<PureState> separable_family(int n_parties, double omega) {
  const int count = dim_for_parties(n_parties);
  std::vector<PureState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int idx = 0; idx < count; ++idx) {
    out.push_back(
        tensor(separable_states(message_from_index(idx, n_parties), omega)));
  }
  return out;
}

std::vector<PureState> hybrid_family(const StrategySpec& spec) {
  const int count = dim_for_parties(spec.n);
  std::vector<PureState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int idx = 0; idx < count; ++idx) {
    out.push_back(hybrid_state(message_from_index(idx, spec.n), spec));
  }
  return out;
}

}  // namespace dsd
