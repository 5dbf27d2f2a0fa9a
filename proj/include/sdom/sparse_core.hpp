#pragma once

#include <span>
#include <vector>

#include "sdom/dyadic_grid.hpp"

namespace sdom {

struct SparseEntry {
  DyadicCube cube;
  /// Witness set E_Q as sorted linear cell indices.
  std::vector<std::size_t> witness;
  /// Builder threshold at this node (0 when not produced by the builder).
  double tau = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

struct SparseFamily {
  GridSpec grid;
  double gamma = 0.5;
  std::vector<SparseEntry> entries;

  /// Sorts entries by (level, index).
  void canonicalize();

  friend bool operator==(const SparseFamily&, const SparseFamily&) = default;
};

struct SparsityReport {
  bool ok = true;
  bool witnesses_inside = true;
  bool witnesses_disjoint = true;
  bool measure_ok = true;
  std::size_t worst_entry = 0;
  /// min over entries of |E_Q| / |Q|; 1 for an empty family.
  double worst_ratio = 1.0;
};

/// Exact check, in integer cell counts, of E_Q inside Q, pairwise disjointness
/// and |E_Q| >= gamma |Q|.
[[nodiscard]] SparsityReport verify_witness_sparsity(const SparseFamily& s, double gamma);

/// max over Q in S of sum_{P in S, P inside Q} |P| / |Q|.
[[nodiscard]] double carleson_sum(const SparseFamily& s);

/// x -> sum over Q in S containing x of prod_i (avg_Q |f_i|^r)^(1/r).
[[nodiscard]] GridFunction sparse_eval(const SparseFamily& s, std::span<const GridFunction> f, double r);

}  // namespace sdom
