#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdom/dyadic_grid.hpp"

namespace sdom {

/// Counter-based generator: value(counter) = mix(seed + counter * 0x9E3779B97F4A7C15)
/// where mix is the SplitMix64 finalizer (shifts 30/27/31, multipliers
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB). Stateless, so draws are
/// reproducible in any order and on any platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  [[nodiscard]] std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform double in [0, 1) with 53 random bits.
  [[nodiscard]] double uniform(std::uint64_t counter) const;
  /// Independent sub-generator keyed by `stream`.
  [[nodiscard]] CounterRng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
};

enum class InputShape { Spike, Indicator, Gauss, Rademacher };

[[nodiscard]] std::string shape_name(InputShape s);
[[nodiscard]] InputShape parse_shape(const std::string& s);

/// Relative box [lo, hi) in unit coordinates of the domain.
struct RelBox {
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};
  friend bool operator==(const RelBox&, const RelBox&) = default;
};

/// One line of a bank descriptor. Coordinates are relative to the domain
/// (0 = origin, 1 = origin + side). Slot i of an m-tuple is centered at
/// center + i * offset. With count > 1, instances after the first draw their
/// centers uniformly in `support` and scale the width by a factor in [0.5, 1.5).
struct BankEntry {
  InputShape shape = InputShape::Gauss;
  Point center{0.5, 0.5};
  double width = 0.05;
  double amplitude = 1.0;
  Point offset{0.0, 0.0};
  std::optional<RelBox> support;
  int count = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const BankEntry&, const BankEntry&) = default;
};

using InputTuple = std::vector<GridFunction>;

[[nodiscard]] std::vector<InputTuple> generate_bank(const std::vector<BankEntry>& entries, const GridSpec& g,
                                                    int m);

/// Every shape, `per_shape` randomized instances each, confined to `support`.
[[nodiscard]] std::vector<BankEntry> curated_bank(const RelBox& support, int per_shape, std::uint64_t seed);

/// Cell box of the cells whose centers fall in a relative box.
[[nodiscard]] CellBox rel_to_cells(const GridSpec& g, const RelBox& b);

}  // namespace sdom
