#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdom/discrete_operator.hpp"
#include "sdom/dyadic_grid.hpp"

namespace sdom {

/// Range of cubes a "sup over Q containing x" runs over.
///  - AllGridCubes: every grid-aligned cube inside the domain (brute-force oracle).
///  - Dyadic: the dyadic cubes of the domain.
///  - DyadicShifted: Dyadic together with the two systems shifted by one and two
///    thirds of the side (sign alternating with the level), keeping only cubes
///    that lie inside the domain.
enum class CubeFamilyMode { AllGridCubes, Dyadic, DyadicShifted };

[[nodiscard]] std::string mode_name(CubeFamilyMode m);
[[nodiscard]] CubeFamilyMode parse_mode(const std::string& s);

/// Cubes of the family, deduplicated, in a fixed order.
[[nodiscard]] std::vector<CellBox> cube_family(const GridSpec& g, CubeFamilyMode mode);
/// Cubes of the family contained in `within`. For Dyadic and AllGridCubes this is
/// the corresponding family of subcubes of `within`.
[[nodiscard]] std::vector<CellBox> cube_family_within(const GridSpec& g, CubeFamilyMode mode, const CellBox& within);

/// max over family cubes Q containing x of prod_i avg_Q |f_i|.
[[nodiscard]] GridFunction multilinear_maximal(std::span<const GridFunction> f, CubeFamilyMode mode);

/// (max over Q containing x of avg_Q |g|^delta)^(1/delta).
[[nodiscard]] GridFunction m_delta(const GridFunction& g, double delta, CubeFamilyMode mode);

/// max over Q containing x of max over xi in Q of |T f(xi) - T(f chi_{3Q})(xi)|.
[[nodiscard]] GridFunction grand_maximal(const OperatorSpec& T, std::span<const GridFunction> f, CubeFamilyMode mode);

/// Local version on Q0: the reference is T(f chi_{3Q0}) and Q ranges over family
/// cubes inside Q0. Cells outside Q0 are left at 0.
[[nodiscard]] GridFunction local_grand_maximal(const OperatorSpec& T, std::span<const GridFunction> f,
                                               const DyadicCube& q0, CubeFamilyMode mode);

struct BoundCheck {
  double c_emp = 0.0;
  bool infinite_flag = false;
  std::size_t argmax = 0;
  double k_r = 0.0;
};

/// Empirical constant in  M_T f <= c (M(|f_1|^r, ..)^(1/r)) + M_{r/4}(T f), i.e.
/// max over cells of (M_T f - M_{r/4}(T f))_+ / M(|f|^r)^(1/r).
[[nodiscard]] BoundCheck mt_pointwise_bound_check(const OperatorSpec& T, std::span<const GridFunction> f, double r,
                                                  double k_r, CubeFamilyMode mode);

}  // namespace sdom
