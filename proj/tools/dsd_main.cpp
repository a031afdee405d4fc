#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsd/bounds.hpp"
#include "dsd/certify.hpp"
#include "dsd/game.hpp"
#include "dsd/oracle.hpp"

namespace {

using nlohmann::json;

// "1,3" -> partition {3,1}
dsd::PartitionSpec parse_partition(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(piece, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse group size '" + piece + "'");
    }
    if (used != piece.size()) {
      throw std::invalid_argument("cannot parse group size '" + piece + "'");
    }
    sizes.push_back(value);
  }
  if (sizes.empty()) {
    throw std::invalid_argument("partition '" + text + "' is empty");
  }
  return dsd::PartitionSpec(std::move(sizes));
}

// Either a single value or "start:end:steps": a linear grid of `steps`
// points with both endpoints included, like numpy's linspace.
std::vector<double> parse_omega_range(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    return {std::stod(text)};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos) {
    throw std::invalid_argument(
        "budget range must look like start:end:steps, got '" + text + "'");
  }
  const double start = std::stod(text.substr(0, first));
  const double end = std::stod(text.substr(first + 1, second - first - 1));
  const int steps = std::stoi(text.substr(second + 1));
  if (steps < 2) {
    throw std::invalid_argument("budget range needs at least two points");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out.push_back(start + (end - start) * i / (steps - 1));
  }
  return out;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) {
    throw std::runtime_error("cannot open output file '" + output_path + "'");
  }
  out << text;
}

std::string curves_to_csv(const std::vector<dsd::BoundCurve>& curves) {
  std::string text = "omega";
  for (const auto& c : curves) {
    text += ",p_";
    if (c.label == "ent" || c.label == "sep") {
      text += c.label;
    } else {
      text += "{" + c.label + "}";
    }
  }
  text += '\n';
  for (std::size_t i = 0; i < curves.front().omegas.size(); ++i) {
    text += format_value(curves.front().omegas[i]);
    for (const auto& c : curves) {
      text += ',';
      text += format_value(c.values[i]);
    }
    text += '\n';
  }
  return text;
}

json curves_to_json(int n, const std::vector<dsd::BoundCurve>& curves) {
  json doc;
  doc["n"] = n;
  doc["omegas"] = curves.front().omegas;
  doc["curves"] = json::array();
  for (const auto& c : curves) {
    doc["curves"].push_back({{"label", c.label},
                             {"partition", c.partition.label()},
                             {"values", c.values}});
  }
  return doc;
}

struct BoundsArgs {
  int n = 2;
  double omega = 0.0;
  std::string output;
};

struct SweepArgs {
  int n = 2;
  std::string omega_range;
  std::vector<std::string> partitions{"all"};
  std::string format = "csv";
  std::string output;
};

struct CertifyArgs {
  int n = 2;
  double omega = 0.0;
  double ps = 0.0;
  double margin = 0.0;
  std::string output;
};

struct OracleArgs {
  int n = 2;
  double omega = 0.0;
  std::string structure;
  int restarts = 16;
  int max_iters = 400;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string output;
};

struct ScanArgs {
  double omega = 0.0;
  int grid = 1000;
  std::string output;
};

int run_bounds(const BoundsArgs& args) {
  json doc;
  doc["n"] = args.n;
  doc["omega"] = args.omega;
  doc["p_ent"] = dsd::p_ent(args.omega, args.n);
  doc["p_sep"] = dsd::p_sep(args.omega, args.n);
  const double sep_sat = 1.0 - std::ldexp(1.0, -args.n);
  doc["omega_saturation_ent"] =
      1.0 - 1.0 / std::ldexp(1.0, args.n);
  doc["omega_saturation_sep"] = sep_sat;
  if (args.omega > 0.0 && args.omega < sep_sat) {
    doc["nu_crit"] = dsd::nu_crit(args.omega, args.n);
  } else {
    doc["nu_crit"] = nullptr;
  }
  emit(doc.dump(2) + "\n", args.output);
  return 0;
}

int run_sweep(const SweepArgs& args) {
  const std::vector<double> omegas = parse_omega_range(args.omega_range);
  std::vector<dsd::PartitionSpec> parts;
  bool all = false;
  for (const auto& text : args.partitions) {
    if (text == "all") {
      all = true;
    } else {
      parts.push_back(parse_partition(text));
    }
  }
  if (all) {
    parts = dsd::all_partitions(args.n);
  }
  const std::vector<dsd::BoundCurve> curves = dsd::sweep(args.n, omegas, parts);
  if (args.format == "csv") {
    emit(curves_to_csv(curves), args.output);
  } else if (args.format == "json") {
    emit(curves_to_json(args.n, curves).dump(2) + "\n", args.output);
  } else {
    throw std::invalid_argument("format must be csv or json, got '" +
                                args.format + "'");
  }
  return 0;
}

int run_certify(const CertifyArgs& args) {
  const dsd::CertVerdict verdict =
      dsd::certify(args.n, args.omega, args.ps, args.margin);
  emit(dsd::verdict_json(verdict), args.output);
  return 0;
}

int run_oracle(const OracleArgs& args) {
  dsd::PartitionSpec structure =
      args.structure.empty() ? dsd::PartitionSpec({args.n})
                             : parse_partition(args.structure);
  dsd::SeesawConfig config(args.n, args.omega, structure);
  config.restarts = args.restarts;
  config.max_iters = args.max_iters;
  config.tol = args.tol;
  config.seed = args.seed;
  const dsd::SeesawReport report = dsd::seesaw(config);
  json doc;
  doc["n"] = args.n;
  doc["omega"] = args.omega;
  doc["structure"] = structure.label();
  doc["restarts"] = args.restarts;
  doc["seed"] = args.seed;
  doc["best_value"] = report.best_value;
  doc["per_restart_values"] = report.per_restart_values;
  doc["converged"] = report.converged;
  doc["iterations_used"] = report.iterations_used;
  doc["reference_bound"] =
      dsd::partition_bound(args.omega, structure).value;
  emit(doc.dump(2) + "\n", args.output);
  return 0;
}

int run_scan(const ScanArgs& args) {
  const dsd::ScanAResult result = dsd::scan_a(args.omega, args.grid);
  json doc;
  doc["omega"] = args.omega;
  doc["grid"] = args.grid;
  doc["a_star"] = result.a_star;
  doc["p_star"] = result.p_star;
  doc["p_ent_2"] = dsd::p_ent(args.omega, 2);
  emit(doc.dump(2) + "\n", args.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Energy-constrained distributed discrimination: success ceilings, "
      "attaining strategies, and entanglement-depth certification"};
  app.require_subcommand(1);

  BoundsArgs bounds_args;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "Closed-form ceilings and critical visibility at one budget");
  bounds_cmd->add_option("--n", bounds_args.n, "number of parties")
      ->required();
  bounds_cmd->add_option("--omega", bounds_args.omega, "energy budget")
      ->required();
  bounds_cmd->add_option("--output", bounds_args.output, "write JSON here");

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Partition ceilings over a budget grid (CSV or JSON)");
  sweep_cmd->add_option("--n", sweep_args.n, "number of parties")->required();
  sweep_cmd
      ->add_option("--omega", sweep_args.omega_range,
                   "budget value or start:end:steps grid")
      ->required();
  sweep_cmd->add_option("--partitions", sweep_args.partitions,
                        "comma-separated group sizes like 1,3; or 'all'");
  sweep_cmd->add_option("--format", sweep_args.format, "csv or json");
  sweep_cmd->add_option("--output", sweep_args.output, "write here");

  CertifyArgs certify_args;
  CLI::App* certify_cmd = app.add_subcommand(
      "certify", "Entanglement-depth verdict for an observed success rate");
  certify_cmd->add_option("--n", certify_args.n, "number of parties")
      ->required();
  certify_cmd->add_option("--omega", certify_args.omega, "energy budget")
      ->required();
  certify_cmd
      ->add_option("--ps", certify_args.ps, "observed success probability")
      ->required();
  certify_cmd->add_option("--margin", certify_args.margin,
                          "extra exclusion margin");
  certify_cmd->add_option("--output", certify_args.output, "write JSON here");

  OracleArgs oracle_args;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "See-saw search for the best strategy with a given structure");
  oracle_cmd->add_option("--n", oracle_args.n, "number of parties")
      ->required();
  oracle_cmd->add_option("--omega", oracle_args.omega, "energy budget")
      ->required();
  oracle_cmd->add_option("--structure", oracle_args.structure,
                         "tensor structure as group sizes, default one block");
  oracle_cmd->add_option("--restarts", oracle_args.restarts, "random restarts");
  oracle_cmd->add_option("--max-iters", oracle_args.max_iters,
                         "iteration cap per restart");
  oracle_cmd->add_option("--tol", oracle_args.tol,
                         "relative improvement stopping threshold");
  oracle_cmd->add_option("--seed", oracle_args.seed, "random seed");
  oracle_cmd->add_option("--output", oracle_args.output, "write JSON here");

  ScanArgs scan_args;
  CLI::App* scan_cmd = app.add_subcommand(
      "scan-a", "Sweep the two-party single-excitation weight");
  scan_cmd->add_option("--omega", scan_args.omega, "energy budget")->required();
  scan_cmd->add_option("--grid", scan_args.grid, "coarse grid points");
  scan_cmd->add_option("--output", scan_args.output, "write JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bounds_cmd->parsed()) return run_bounds(bounds_args);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args);
    if (certify_cmd->parsed()) return run_certify(certify_args);
    if (oracle_cmd->parsed()) return run_oracle(oracle_args);
    if (scan_cmd->parsed()) return run_scan(scan_args);
  } catch (const dsd::InconsistentObservationError& e) {
    std::cerr << "inconsistent observation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
