#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sdom/serialization.hpp"

namespace sdom {

struct PlanParams {
  int level_min = 0;
  int level_max = 0;
  int subdepth = 1;
  /// separation only: when set, each K_ell is sampled on levels up to ell + ell_offset.
  std::optional<int> ell_offset;
  friend bool operator==(const PlanParams&, const PlanParams&) = default;
};

struct ExperimentConfig {
  std::string command;
  GridSpec grid;
  std::optional<KernelSpec> kernel;
  std::vector<BankEntry> bank;
  double r = 2.0;
  double q = 1.0;
  double delta = 1.0;
  double gamma = 0.5;
  CubeFamilyMode mode = CubeFamilyMode::Dyadic;
  DyadicCube root;
  PlanParams plan;
  std::optional<DiniModulus> modulus;
  std::vector<WeightSpec> weights;
  std::vector<double> p;
  std::vector<int> ells;
  double beta = 1.0;
};

inline const std::vector<std::string> kCommands = {"kr",      "h2",      "dini",    "build",
                                                   "dominate", "maximal", "weights", "separation"};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  /// "field.path: message" for every problem found.
  std::vector<std::string> errors;
};

/// Parses and validates a JSON config, collecting every error.
[[nodiscard]] ParseResult parse_config(const std::string& text);

/// Fully explicit form of a parsed config (every default written out).
[[nodiscard]] Json canonical_config(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the canonical config text, as 16 hex digits.
[[nodiscard]] std::string config_hash(const ExperimentConfig& cfg);

/// One RFC-4180 record terminated by CRLF.
[[nodiscard]] std::string csv_row(const std::vector<std::string>& fields);

struct RunOutcome {
  /// 0 success, 2 invariant violation.
  int status = 0;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> violations;
};

/// Runs the command and writes <out>/<command>.json and <out>/<command>.csv.
/// Errors propagate as exceptions after any partially written files are removed.
[[nodiscard]] RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace sdom
