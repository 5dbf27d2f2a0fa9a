#pragma once

#include <vector>

#include "sdom/discrete_operator.hpp"
#include "sdom/maximal_ops.hpp"

namespace sdom {

/// Weights w_1..w_m with exponents p_i > r. The combined exponent p has
/// 1/p = sum_i 1/p_i and the target weight is v = prod_i w_i^(p/p_i).
struct WeightTuple {
  std::vector<GridFunction> w;
  std::vector<double> p;
  double r = 1.0;

  void validate() const;
  [[nodiscard]] double p_total() const;
  [[nodiscard]] GridFunction v() const;
};

/// Values below this are raised to it so that power weights stay positive.
inline constexpr double kWeightFloor = 1e-8;

/// max(|x - c|^alpha, kWeightFloor) at cell centers.
[[nodiscard]] GridFunction power_weight(const GridSpec& g, const Point& c, double alpha);
[[nodiscard]] GridFunction constant_weight(const GridSpec& g, double value);

/// max over family cubes Q of
///   avg_Q v * prod_i (avg_Q w_i^(-r/(p_i-r)))^(p(p_i-r)/(p_i r)).
[[nodiscard]] double vec_ap_characteristic(const WeightTuple& W, CubeFamilyMode mode);

/// max{1, max_i (p_i/r)'/p}
[[nodiscard]] double characteristic_exponent(const WeightTuple& W);

/// (sum |g|^p weight h^n)^(1/p)
[[nodiscard]] double weighted_lp_norm(const GridFunction& g, const GridFunction& weight, double p);

struct WeightedNormReport {
  double characteristic = 0.0;
  double exponent = 1.0;
  /// characteristic^exponent
  double bound = 0.0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
};

/// Per input tuple ||T f||_{L^p(v)} / prod_i ||f_i||_{L^{p_i}(w_i)}.
[[nodiscard]] WeightedNormReport weighted_norm_ratio(const OperatorSpec& T, const WeightTuple& W,
                                                     const std::vector<InputTuple>& bank,
                                                     CubeFamilyMode mode = CubeFamilyMode::Dyadic);

}  // namespace sdom
