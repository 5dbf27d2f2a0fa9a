#include "sdom/sparse_core.hpp"

#include <algorithm>
#include <cmath>

namespace sdom {

void SparseFamily::canonicalize() {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.cube < b.cube; });
}

SparsityReport verify_witness_sparsity(const SparseFamily& s, double gamma) {
  SparsityReport rep;
  std::vector<int> owner(s.grid.cell_count(), -1);
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const SparseEntry& entry = s.entries[e];
    const CellBox box = entry.cube.box(s.grid);
    for (std::size_t cell : entry.witness) {
      if (cell >= owner.size() || !box.contains(s.grid.coords(cell))) {
        rep.witnesses_inside = false;
        continue;
      }
      if (owner[cell] != -1 && owner[cell] != static_cast<int>(e)) rep.witnesses_disjoint = false;
      owner[cell] = static_cast<int>(e);
    }
    // duplicates inside one witness list count once
    std::vector<std::size_t> w = entry.witness;
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    const double ratio = static_cast<double>(w.size()) / static_cast<double>(box.count());
    if (ratio < rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_entry = e;
    }
    if (static_cast<double>(w.size()) < gamma * static_cast<double>(box.count())) rep.measure_ok = false;
  }
  rep.ok = rep.witnesses_inside && rep.witnesses_disjoint && rep.measure_ok;
  return rep;
}

double carleson_sum(const SparseFamily& s) {
  double best = 0.0;
  for (const SparseEntry& q : s.entries) {
    const CellBox qb = q.cube.box(s.grid);
    std::size_t total = 0;
    for (const SparseEntry& p : s.entries)
      if (qb.contains(p.cube.box(s.grid))) total += p.cube.box(s.grid).count();
    best = std::max(best, static_cast<double>(total) / static_cast<double>(qb.count()));
  }
  return best;
}

GridFunction sparse_eval(const SparseFamily& s, std::span<const GridFunction> f, double r) {
  require(std::isfinite(r) && r >= 1.0, "sparse_eval: r must be >= 1");
  for (const auto& fi : f) require(fi.grid() == s.grid, "sparse_eval: input on a different grid");
  std::vector<double> weights(s.entries.size());
  parallel_for(s.entries.size(), [&](std::size_t e) {
    const CellBox b = s.entries[e].cube.box(s.grid);
    double p = 1.0;
    for (const auto& fi : f) p *= local_average(fi, b, r);
    weights[e] = p;
  });
  GridFunction out(s.grid, 0.0);
  for (std::size_t e = 0; e < s.entries.size(); ++e)
    for_each_cell(s.grid, s.entries[e].cube.box(s.grid), [&](std::size_t i) { out[i] += weights[e]; });
  return out;
}

}  // namespace sdom
