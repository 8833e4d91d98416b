#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nbattack/chain.hpp"
#include "nbattack/error.hpp"
#include "nbattack/graph.hpp"

namespace nbattack::cli {

/// Experiment configuration as read from the JSON config file:
///
///   {
///     "family":  {"kind": "circle", "n": 8},            // or "dim", "side", "offsets"
///     "chain":   {"p": 0.5, "seed": 1, "replicas": 4, "samples": 100000,
///                 "burn_in_steps": null, "thinning": null},
///     "modes":   {"exact": false, "fkg": false, "distances": true, "stein": true,
///                 "write_samples": true, "dump_pi": false},
///     "cap": 16, "fkg_limit": 100,
///     "sweep":   {"sizes": [100, 1000, 10000]},
///     "output_dir": "runs/circle8"
///   }
///
/// Absent burn_in_steps / thinning take the size-dependent defaults.
struct RunConfig {
  FamilySpec family;
  ChainConfig chain;
  std::optional<std::uint64_t> burn_in_steps;
  std::optional<std::uint64_t> thinning;
  bool exact = false;
  bool fkg = false;
  bool distances = true;
  bool stein = true;
  bool write_samples = true;
  bool dump_pi = false;
  int cap = 16;
  std::size_t fkg_limit = 100;
  std::vector<int> sweep_sizes;
  std::string output_dir;

  /// ChainConfig with defaults resolved for a graph of `n` nodes.
  ChainConfig chain_for(int n) const;
  nlohmann::json to_json() const;
};

/// Schema validation; errors: config-invalid.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const nlohmann::json& doc);

/// Each command writes its outputs plus manifest.json into `out`.
void run_simulate(const RunConfig& cfg, const std::filesystem::path& out);
void run_exact(const RunConfig& cfg, const std::filesystem::path& out);
void run_bound(const RunConfig& cfg, const std::filesystem::path& out);
void run_sweep(const RunConfig& cfg, const std::filesystem::path& out);

/// 0 success, 2 config error, 3 resource cap, 4 numeric failure, 1 anything else.
int exit_code_for(ErrorCode code) noexcept;

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double ('.' separator).
std::string format_double(double v);

}  // namespace nbattack::cli
