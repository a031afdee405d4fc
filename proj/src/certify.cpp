#include "dsd/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "dsd/qcore.hpp"

namespace dsd {

CertVerdict certify(int n, double omega, double observed_ps, double margin) {
  if (n < 2 || n > kMaxExactParties) {
    throw std::invalid_argument("certification needs between 2 and " +
                                std::to_string(kMaxExactParties) + " parties");
  }
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::domain_error("energy budget must lie in [0, 1]");
  }
  if (!(observed_ps >= 0.0 && observed_ps <= 1.0)) {
    throw std::domain_error("success probability must lie in [0, 1]");
  }
  if (!(margin >= 0.0)) {
    throw std::domain_error("margin must be nonnegative");
  }
  const double ceiling = p_ent(omega, n);
  if (observed_ps > ceiling + 1e-9) {
    throw InconsistentObservationError(
        "observed success " + std::to_string(observed_ps) +
        " exceeds the unrestricted ceiling " + std::to_string(ceiling) +
        " at budget " + std::to_string(omega));
  }

  CertVerdict verdict;
  verdict.n = n;
  verdict.omega = omega;
  verdict.observed_ps = observed_ps;

  const std::vector<PartitionSpec> parts = all_partitions(n);
  std::vector<double> values;
  values.reserve(parts.size());
  for (const auto& p : parts) {
    values.push_back(partition_bound(omega, p).value);
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (values[i] < observed_ps - margin) {
      verdict.excluded_partitions.emplace_back(parts[i], values[i]);
    }
  }
  // Depth d is ruled out when the observation beats everything buildable
  // from blocks of at most d parties.
  verdict.depth_lower_bound = 1;
  for (int d = 1; d < n; ++d) {
    double best = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].max_group() <= d) best = std::max(best, values[i]);
    }
    if (observed_ps > best) verdict.depth_lower_bound = d + 1;
  }
  verdict.gme = (verdict.depth_lower_bound == n);
  return verdict;
}

std::string verdict_json(const CertVerdict& verdict) {
  nlohmann::json doc;
  doc["n"] = verdict.n;
  doc["omega"] = verdict.omega;
  doc["observed_ps"] = verdict.observed_ps;
  doc["excluded_partitions"] = nlohmann::json::array();
  for (const auto& [part, bound] : verdict.excluded_partitions) {
    doc["excluded_partitions"].push_back(
        {{"partition", part.label()}, {"bound", bound}});
  }
  doc["depth_lower_bound"] = verdict.depth_lower_bound;
  doc["gme"] = verdict.gme;
  return doc.dump(2) + "\n";
}

std::vector<BoundCurve> sweep(int n, const std::vector<double>& omega_grid,
                              const std::vector<PartitionSpec>& partitions) {
  if (n < 2 || n > kMaxExactParties) {
    throw std::invalid_argument("sweep needs between 2 and " +
                                std::to_string(kMaxExactParties) + " parties");
  }
  if (omega_grid.empty()) {
    throw std::invalid_argument("sweep needs at least one budget value");
  }
  for (double w : omega_grid) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::domain_error("energy budget must lie in [0, 1]");
    }
  }
  // Requested partitions plus the two envelope curves, in canonical order.
  std::vector<PartitionSpec> wanted;
  auto add = [&](const PartitionSpec& p) {
    if (p.n() != n) {
      throw std::invalid_argument("partition covers " + std::to_string(p.n()) +
                                  " parties, expected " + std::to_string(n));
    }
    if (std::find(wanted.begin(), wanted.end(), p) == wanted.end()) {
      wanted.push_back(p);
    }
  };
  add(PartitionSpec({n}));
  for (const auto& p : partitions) add(p);
  add(PartitionSpec(std::vector<int>(static_cast<std::size_t>(n), 1)));

  std::vector<BoundCurve> curves;
  for (const auto& canonical : all_partitions(n)) {
    if (std::find(wanted.begin(), wanted.end(), canonical) == wanted.end()) {
      continue;
    }
    std::string label;
    if (canonical.groups() == 1) {
      label = "ent";
    } else if (canonical.max_group() == 1) {
      label = "sep";
    } else {
      label = canonical.label();
    }
    std::vector<double> values;
    values.reserve(omega_grid.size());
    for (double w : omega_grid) {
      values.push_back(partition_bound(w, canonical).value);
    }
    curves.push_back(
        BoundCurve{std::move(label), canonical, omega_grid, std::move(values)});
  }
  return curves;
}

}  // namespace dsd
