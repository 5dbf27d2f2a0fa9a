#pragma once

#include <span>
#include <vector>

#include "sdom/discrete_operator.hpp"
#include "sdom/maximal_ops.hpp"
#include "sdom/sparse_core.hpp"

namespace sdom {

/// Cell mask over the whole grid.
using CellMask = std::vector<char>;

/// Smallest tau among 0 and the values of s on q0 with #{x in q0 : s(x) > tau}
/// at most floor(#cells(q0) / 2^(n+2)).
[[nodiscard]] double adaptive_threshold(const GridFunction& s, const DyadicCube& q0);

/// Maximal dyadic P strictly inside q0 with |P cap E| > lambda |P|, found top-down.
/// Requires E inside q0 and |E| <= 2^-(n+2) |q0|; throws Precondition otherwise.
/// Output is in (level, index) order.
[[nodiscard]] std::vector<DyadicCube> cz_select(const GridSpec& g, const CellMask& e, const DyadicCube& q0,
                                                double lambda);

struct BuilderNodeStats {
  DyadicCube cube;
  double A = 0.0;
  double tau = 0.0;
  std::size_t e_cells = 0;
  std::size_t cube_cells = 0;
  std::vector<DyadicCube> selected;
  std::size_t selected_cells = 0;
  /// sum |P_j| / |Q0|
  double sum_pj_ratio = 0.0;
};

struct BuildResult {
  SparseFamily family;
  std::vector<BuilderNodeStats> stats;
};

/// Recursive stopping-time construction of a 1/2-sparse family dominating T f on root.
/// Requires supp f_i inside root and an unclipped triple(root). `max_depth` 0 means 2L.
[[nodiscard]] BuildResult build_sparse_family(const OperatorSpec& T, std::span<const GridFunction> f,
                                              const DyadicCube& root, double r, CubeFamilyMode mode,
                                              int max_depth = 0);

struct PointwiseCheck {
  double c_emp = 0.0;
  bool infinite_flag = false;
  std::size_t argmax = 0;
};

/// max over x in q0 of (|T(f chi_{3Q0})(x)| - M_{T,Q0} f(x))_+ / |prod f_i(x)|.
[[nodiscard]] PointwiseCheck lemma_pointwise_check(const OperatorSpec& T, std::span<const GridFunction> f,
                                                   const DyadicCube& q0, CubeFamilyMode mode);

struct DominationReport {
  double c_emp = 0.0;
  std::size_t argmax_cell = 0;
  bool support_flag = false;
  DyadicCube root;
};

/// max over x in root with sparse_eval > 0 of |T f(x)| / sparse_eval(S, f, r)(x).
/// The root is the coarsest entry of S (the whole domain for an empty family).
[[nodiscard]] DominationReport domination_constant(const OperatorSpec& T, std::span<const GridFunction> f,
                                                   const SparseFamily& s, double r);

}  // namespace sdom
