#include "dsd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "dsd/qcore.hpp"

namespace dsd {

namespace {

void check_omega(double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::domain_error("energy budget must lie in [0, 1], got " +
                            std::to_string(omega));
  }
}

// Success ceiling for k equiprobable states as a function of the energy
// budget, with k passed as a double so callers can use k = 2^n without
// integer overflow. Piecewise: the raw expression peaks at 1 when
// omega = 1 - 1/k and decreases again beyond it, while larger budgets can
// only help, so the ceiling stays pinned at 1 from there on.
double ceiling_core(double omega, double k) {
  const double sat = 1.0 - 1.0 / k;
  if (omega >= sat) return 1.0;
  const double s = std::sqrt(omega * (k - 1.0)) + std::sqrt(1.0 - omega);
  return s * s / k;
}

// d ceiling_core / d omega on the rising branch; 0 once saturated.
double ceiling_slope(double omega, double k) {
  const double sat = 1.0 - 1.0 / k;
  if (omega >= sat) return 0.0;
  const double s = std::sqrt(omega * (k - 1.0)) + std::sqrt(1.0 - omega);
  const double ds =
      0.5 * (std::sqrt((k - 1.0) / omega) - 1.0 / std::sqrt(1.0 - omega));
  return 2.0 * s * ds / k;
}

}  // namespace

PartitionSpec::PartitionSpec(std::vector<int> group_sizes)
    : sizes_(std::move(group_sizes)) {
  if (sizes_.empty()) {
    throw std::invalid_argument("partition needs at least one group");
  }
  long total = 0;
  for (int s : sizes_) {
    if (s < 1) {
      throw std::invalid_argument("group sizes must be positive");
    }
    total += s;
  }
  if (total > kMaxExactParties) {
    throw std::invalid_argument("partition covers " + std::to_string(total) +
                                " parties, supported maximum is " +
                                std::to_string(kMaxExactParties));
  }
  std::sort(sizes_.begin(), sizes_.end(), std::greater<int>());
  n_ = static_cast<int>(total);
}

std::string PartitionSpec::label() const {
  std::string out;
  for (auto it = sizes_.rbegin(); it != sizes_.rend(); ++it) {
    if (!out.empty()) out += '|';
    out += std::to_string(*it);
  }
  return out;
}

namespace {

void enumerate_rec(int remaining, int max_part, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int next = std::min(remaining, max_part); next >= 1; --next) {
    cur.push_back(next);
    enumerate_rec(remaining - next, next, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<PartitionSpec> all_partitions(int n) {
  if (n < 1 || n > kMaxExactParties) {
    throw std::invalid_argument("party count must be in [1, " +
                                std::to_string(kMaxExactParties) + "]");
  }
  std::vector<std::vector<int>> raw;
  std::vector<int> cur;
  enumerate_rec(n, n, cur, raw);
  // Reverse-lexicographic enumeration already orders partitions with equal
  // group counts descending; a stable sort by group count finishes the job.
  std::stable_sort(raw.begin(), raw.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     return a.size() < b.size();
                   });
  std::vector<PartitionSpec> out;
  out.reserve(raw.size());
  for (auto& sizes : raw) {
    out.emplace_back(std::move(sizes));
  }
  return out;
}

std::vector<PartitionSpec> partitions_with_max_group(int n, int d) {
  if (d < 1) {
    throw std::invalid_argument("maximum group size must be positive");
  }
  std::vector<PartitionSpec> out;
  for (auto& p : all_partitions(n)) {
    if (p.max_group() <= d) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

double p_sd(double omega, int n_states) {
  check_omega(omega);
  if (n_states < 2) {
    throw std::invalid_argument("need at least two states to discriminate");
  }
  return ceiling_core(omega, static_cast<double>(n_states));
}

double p_ent(double omega, int n_parties) {
  check_omega(omega);
  if (n_parties < 1 || n_parties > 512) {
    throw std::invalid_argument("party count must be in [1, 512]");
  }
  return ceiling_core(omega, std::ldexp(1.0, n_parties));
}

double p_sep(double omega, int n_parties) {
  check_omega(omega);
  if (n_parties < 1 || n_parties > 512) {
    throw std::invalid_argument("party count must be in [1, 512]");
  }
  const double sat = 1.0 - std::ldexp(1.0, -n_parties);
  if (omega >= sat) return 1.0;
  const double v = std::pow(1.0 - omega, 1.0 / n_parties);
  const double per_party = 0.5 + std::sqrt(v) * std::sqrt(1.0 - v);
  return std::pow(per_party, n_parties);
}

GBounds g_bounds(double p_s, int n_states) {
  if (n_states < 2) {
    throw std::invalid_argument("need at least two states to discriminate");
  }
  const double k = static_cast<double>(n_states);
  if (!(p_s >= 1.0 / k - 1e-12 && p_s <= 1.0 + 1e-12)) {
    throw std::domain_error("success probability " + std::to_string(p_s) +
                            " outside [1/k, 1] for k = " +
                            std::to_string(n_states));
  }
  const double p = std::clamp(p_s, 1.0 / k, 1.0);
  const double root = 2.0 * std::sqrt(std::max(0.0, p * (1.0 - p) * (k - 1.0)));
  GBounds out;
  out.g_minus = std::clamp((1.0 + (k - 2.0) * p - root) / k, 0.0, 1.0);
  out.g_plus = std::clamp((1.0 + (k - 2.0) * p + root) / k, 0.0, 1.0);
  return out;
}

double nu_crit(double omega, int n_parties) {
  if (n_parties < 1 || n_parties > 512) {
    throw std::invalid_argument("party count must be in [1, 512]");
  }
  const double base = std::ldexp(1.0, -n_parties);
  if (!(omega > 0.0 && omega < 1.0 - base)) {
    throw std::domain_error(
        "critical visibility is defined for budgets strictly between 0 and "
        "the separable saturation point");
  }
  return (p_sep(omega, n_parties) - base) / (p_ent(omega, n_parties) - base);
}

namespace {

constexpr std::uint64_t kRestartSeed = 0x9e3779b97f4a7c15ULL;
constexpr int kRestarts = 16;
constexpr int kMaxIters = 10000;

// Euclidean projection onto {t >= 0, sum t = budget}.
std::vector<double> project_simplex(std::vector<double> u, double budget) {
  std::vector<double> s(u);
  std::sort(s.begin(), s.end(), std::greater<double>());
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double cand = (cum - budget) / static_cast<double>(k + 1);
    if (s[k] - cand > 0.0) tau = cand;
  }
  for (double& x : u) x = std::max(0.0, x - tau);
  return u;
}

// Objective in the log domain. Block energies are parametrized as
// omega_j = 1 - exp(-t_j), which turns the multiplicative energy
// constraint prod(1 - omega_j) = 1 - omega into the simplex sum t = T.
double log_objective(const std::vector<double>& t,
                     const std::vector<double>& k_eff) {
  double acc = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double om = -std::expm1(-t[j]);
    acc += std::log(ceiling_core(om, k_eff[j]));
  }
  return acc;
}

struct AscentResult {
  double log_value;
  std::vector<double> t;
};

AscentResult ascend(std::vector<double> t, double budget,
                    const std::vector<double>& k_eff) {
  const std::size_t m = t.size();
  double cur = log_objective(t, k_eff);
  double eta = std::max(budget, 1e-6);
  const double eta_cap = 10.0 * std::max(budget, 1e-6);
  for (int iter = 0; iter < kMaxIters; ++iter) {
    std::vector<double> grad(m);
    for (std::size_t j = 0; j < m; ++j) {
      // The slope has a square-root singularity at zero energy; evaluating
      // at a tiny positive floor keeps the gradient finite while still
      // pushing hard away from empty blocks.
      const double om = std::max(-std::expm1(-t[j]), 1e-18);
      grad[j] = ceiling_slope(om, k_eff[j]) / ceiling_core(om, k_eff[j]) *
                std::exp(-t[j]);
    }
    std::vector<double> next;
    double next_val = cur;
    bool moved = false;
    for (int bt = 0; bt < 70; ++bt) {
      std::vector<double> cand(m);
      for (std::size_t j = 0; j < m; ++j) cand[j] = t[j] + eta * grad[j];
      cand = project_simplex(std::move(cand), budget);
      const double val = log_objective(cand, k_eff);
      if (val >= cur) {
        next = std::move(cand);
        next_val = val;
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
    double step = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      step = std::max(step, std::abs(next[j] - t[j]));
    }
    t = std::move(next);
    cur = next_val;
    eta = std::min(eta * 1.5, eta_cap);
    if (step <= 1e-10 * std::max(1.0, budget)) break;
  }
  return {cur, std::move(t)};
}

}  // namespace

PartitionBoundResult partition_bound(double omega, const PartitionSpec& spec) {
  check_omega(omega);
  const std::vector<int>& sizes = spec.group_sizes();
  const int m = spec.groups();
  const int n = spec.n();

  PartitionBoundResult out;
  out.restarts_agree = true;
  out.energies.assign(sizes.size(), 0.0);

  if (omega <= 0.0) {
    out.value = std::ldexp(1.0, -n);
    return out;
  }
  const double global_sat = 1.0 - std::ldexp(1.0, -n);
  if (omega >= global_sat) {
    // Splitting the budget with equal exponents saturates every block:
    // (1 - omega)^(k_j / n) <= 2^(-k_j) exactly when omega >= 1 - 2^(-n).
    for (int j = 0; j < m; ++j) {
      out.energies[j] = 1.0 - std::pow(1.0 - omega,
                                       static_cast<double>(sizes[j]) / n);
    }
    out.value = 1.0;
    return out;
  }
  if (m == 1) {
    out.value = p_ent(omega, n);
    out.energies[0] = omega;
    return out;
  }

  const double budget = -std::log1p(-omega);
  std::vector<double> k_eff(sizes.size());
  for (int j = 0; j < m; ++j) {
    k_eff[j] = std::ldexp(1.0, sizes[j]);
  }

  std::mt19937_64 rng(kRestartSeed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_t;
  std::vector<double> finals;
  finals.reserve(kRestarts);
  for (int r = 0; r < kRestarts; ++r) {
    std::vector<double> t0(sizes.size());
    if (r == 0) {
      // Deterministic start at the equal-exponent split.
      for (int j = 0; j < m; ++j) {
        t0[j] = budget * sizes[j] / static_cast<double>(n);
      }
    } else {
      // Dirichlet(1,...,1) direction scaled onto the simplex.
      std::vector<double> e(sizes.size());
      double sum = 0.0;
      for (int j = 0; j < m; ++j) {
        e[j] = -std::log(1.0 - unif(rng));
        sum += e[j];
      }
      for (int j = 0; j < m; ++j) {
        t0[j] = sum > 0.0 ? budget * e[j] / sum
                          : budget / static_cast<double>(m);
      }
    }
    AscentResult res = ascend(std::move(t0), budget, k_eff);
    finals.push_back(res.log_value);
    if (res.log_value > best) {
      best = res.log_value;
      best_t = std::move(res.t);
    }
  }
  out.value = std::exp(best);
  for (int j = 0; j < m; ++j) {
    out.energies[j] = -std::expm1(-best_t[j]);
  }
  for (double f : finals) {
    if (std::abs(std::exp(f) - out.value) > 1e-9) {
      out.restarts_agree = false;
      break;
    }
  }
  return out;
}

std::map<int, double> depth_bound_table(double omega, int n) {
  check_omega(omega);
  if (n < 1 || n > kMaxExactParties) {
    throw std::invalid_argument("party count must be in [1, " +
                                std::to_string(kMaxExactParties) + "]");
  }
  std::vector<PartitionSpec> parts = all_partitions(n);
  std::vector<double> values;
  values.reserve(parts.size());
  for (const auto& p : parts) {
    values.push_back(partition_bound(omega, p).value);
  }
  std::map<int, double> table;
  for (int d = 1; d <= n; ++d) {
    double bound = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].max_group() <= d) {
        bound = std::max(bound, values[i]);
      }
    }
    table[d] = bound;
  }
  return table;
}

}  // namespace dsd
