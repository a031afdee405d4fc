#include "dsd/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dsd/constructions.hpp"

namespace dsd {

Strategy::Strategy(std::vector<PureState> signal_states,
                   std::vector<BinaryMeasurement> local_measurements)
    : states(std::move(signal_states)),
      measurements(std::move(local_measurements)) {
  if (measurements.empty() || measurements.size() > 30) {
    throw std::invalid_argument("need between 1 and 30 local measurements");
  }
  const int n = static_cast<int>(measurements.size());
  const std::size_t want = std::size_t{1} << n;
  if (states.size() != want) {
    throw std::invalid_argument("need one signal state per message (" +
                                std::to_string(want) + "), got " +
                                std::to_string(states.size()));
  }
  for (const auto& m : measurements) {
    if (m.dim() != 2) {
      throw std::invalid_argument("local measurements must act on one qubit");
    }
  }
  for (const auto& s : states) {
    if (s.n_parties() != n) {
      throw std::invalid_argument("signal state party count mismatch");
    }
  }
}

NoiseModel::NoiseModel(double nu) : visibility(nu) {
  if (!(nu >= 0.0 && nu <= 1.0)) {
    throw std::domain_error("visibility must lie in [0, 1]");
  }
}

namespace {

Eigen::Matrix2cd element_matrix(const BinaryMeasurement& m, int outcome) {
  return m.element(outcome).entries();
}

// <psi_x| (tensor of each party's own-bit element) |psi_x>
double win_term(const Strategy& strategy, int msg) {
  const int n = strategy.n_parties();
  const PureState& psi = strategy.states[static_cast<std::size_t>(msg)];
  Vector v = psi.amplitudes();
  for (int party = 0; party < n; ++party) {
    const int bit = (msg >> (n - 1 - party)) & 1;
    v = apply_on_party(element_matrix(strategy.measurements[
                           static_cast<std::size_t>(party)], bit),
                       v, n, party);
  }
  return psi.amplitudes().dot(v).real();
}

}  // namespace

double born_success(const Strategy& strategy) {
  const int n = strategy.n_parties();
  const int count = 1 << n;
  double acc = 0.0;
  for (int msg = 0; msg < count; ++msg) {
    acc += win_term(strategy, msg);
  }
  return acc / count;
}

double noisy_success(const Strategy& strategy, const NoiseModel& noise) {
  const int n = strategy.n_parties();
  const int count = 1 << n;
  const double dim = count;
  double acc = 0.0;
  for (int msg = 0; msg < count; ++msg) {
    double trace_prod = 1.0;
    for (int party = 0; party < n; ++party) {
      const int bit = (msg >> (n - 1 - party)) & 1;
      trace_prod *= strategy.measurements[static_cast<std::size_t>(party)]
                        .element(bit)
                        .entries()
                        .trace()
                        .real();
    }
    acc += noise.visibility * win_term(strategy, msg) +
           (1.0 - noise.visibility) * trace_prod / dim;
  }
  return acc / count;
}

namespace {

double bipartite_success(double omega, double a) {
  std::vector<PureState> states;
  states.reserve(4);
  for (int idx = 0; idx < 4; ++idx) {
    states.push_back(bipartite_state(message_from_index(idx, 2), omega, a));
  }
  std::vector<BinaryMeasurement> ms{plus_measurement(), plus_measurement()};
  return born_success(Strategy(std::move(states), std::move(ms)));
}

}  // namespace

ScanAResult scan_a(double omega, int grid) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::domain_error("energy budget must lie in [0, 1]");
  }
  if (grid < 3) {
    throw std::invalid_argument("grid needs at least 3 points");
  }
  const double hi = omega / 2.0;
  if (hi == 0.0) {
    return {0.0, bipartite_success(0.0, 0.0)};
  }
  // Coarse pass.
  int best_i = 0;
  double best_val = -1.0;
  for (int i = 0; i < grid; ++i) {
    const double a = hi * i / (grid - 1);
    const double val = bipartite_success(omega, a);
    if (val > best_val) {
      best_val = val;
      best_i = i;
    }
  }
  // Golden-section refinement around the best grid point.
  double lo_a = hi * std::max(0, best_i - 1) / (grid - 1);
  double hi_a = hi * std::min(grid - 1, best_i + 1) / (grid - 1);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi_a - invphi * (hi_a - lo_a);
  double d = lo_a + invphi * (hi_a - lo_a);
  double fc = bipartite_success(omega, c);
  double fd = bipartite_success(omega, d);
  while (hi_a - lo_a > 1e-9) {
    if (fc > fd) {
      hi_a = d;
      d = c;
      fd = fc;
      c = hi_a - invphi * (hi_a - lo_a);
      fc = bipartite_success(omega, c);
    } else {
      lo_a = c;
      c = d;
      fc = fd;
      d = lo_a + invphi * (hi_a - lo_a);
      fd = bipartite_success(omega, d);
    }
  }
  const double a_star = 0.5 * (lo_a + hi_a);
  const double p_star = bipartite_success(omega, a_star);
  if (p_star >= best_val) {
    return {a_star, p_star};
  }
  return {hi * best_i / (grid - 1), best_val};
}

}  // namespace dsd
