#pragma once

#include <json.hpp>

#include "sdom/cz_builder.hpp"
#include "sdom/input_bank.hpp"
#include "sdom/kernel_models.hpp"
#include "sdom/weight_lab.hpp"

namespace sdom {

using Json = nlohmann::ordered_json;

[[nodiscard]] Json grid_to_json(const GridSpec& g);
[[nodiscard]] GridSpec grid_from_json(const Json& j);

/// {n, L, origin, side, values} with values in linear-index order.
[[nodiscard]] Json function_to_json(const GridFunction& f);
[[nodiscard]] GridFunction function_from_json(const Json& j);

/// {variant, m, n, params...}. Custom kernels carry code and cannot be serialized.
[[nodiscard]] Json kernel_to_json(const KernelSpec& k);
[[nodiscard]] KernelSpec kernel_from_json(const Json& j);

[[nodiscard]] Json modulus_to_json(const DiniModulus& w);
[[nodiscard]] DiniModulus modulus_from_json(const Json& j);

[[nodiscard]] Json estimate_to_json(const EstimateReport& e);

[[nodiscard]] Json cube_to_json(const DyadicCube& q, int n);
[[nodiscard]] DyadicCube cube_from_json(const Json& j, int n);

/// {gamma, grid, entries: [{level, index, witness_cells, tau}]}
[[nodiscard]] Json family_to_json(const SparseFamily& s);
[[nodiscard]] SparseFamily family_from_json(const Json& j);

[[nodiscard]] Json stats_to_json(const std::vector<BuilderNodeStats>& stats, int n);
[[nodiscard]] Json domination_to_json(const DominationReport& d);

[[nodiscard]] Json bank_entry_to_json(const BankEntry& e);
[[nodiscard]] BankEntry bank_entry_from_json(const Json& j);

/// Weight description: {kind: "power", center, alpha} | {kind: "constant", value} |
/// {kind: "custom", values}.
struct WeightSpec {
  std::string kind = "constant";
  Point center{0.5, 0.5};
  double alpha = 0.0;
  double value = 1.0;
  std::vector<double> values;

  [[nodiscard]] GridFunction realize(const GridSpec& g) const;
  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

[[nodiscard]] Json weight_spec_to_json(const WeightSpec& w);
[[nodiscard]] WeightSpec weight_spec_from_json(const Json& j);

/// {char, exponent, bound, ratios, max_ratio}
[[nodiscard]] Json weighted_report_to_json(const WeightedNormReport& r);

}  // namespace sdom
