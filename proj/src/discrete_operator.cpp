#include "sdom/discrete_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sdom {

void OperatorSpec::validate() const {
  grid.validate();
  kernel.validate();
  require(kernel.n == grid.n, "operator: kernel dimension does not match the grid");
}

void OperatorSpec::check_inputs(std::span<const GridFunction> f) const {
  require(static_cast<int>(f.size()) == kernel.m, "operator: expected " + std::to_string(kernel.m) +
                                                      " input functions");
  for (const auto& fi : f) require(fi.grid() == grid, "operator: input defined on a different grid");
}

namespace {

struct Source {
  std::size_t cell;
  Point y;
  double value;
};

std::vector<Source> nonzero_cells(const GridFunction& f, const CellBox& box) {
  std::vector<Source> out;
  const GridSpec& g = f.grid();
  for_each_cell(g, box.intersect(full_box(g)), [&](std::size_t i) {
    if (f[i] != 0.0) out.push_back({i, g.center(i), f[i]});
  });
  return out;
}

[[noreturn]] void non_finite(const GridSpec& g, std::size_t x, std::span<const Source* const> ys) {
  std::ostringstream msg;
  const CellCoord cx = g.coords(x);
  msg << "non-finite kernel value at x cell (" << cx[0] << ", " << cx[1] << ")";
  for (const Source* s : ys) {
    const CellCoord cy = g.coords(s->cell);
    msg << ", y cell (" << cy[0] << ", " << cy[1] << ")";
  }
  fail(ErrorCode::NonFinite, msg.str());
}

}  // namespace

std::vector<double> apply_region(const OperatorSpec& T, std::span<const GridFunction> f, const CellBox& input,
                                 const CellBox& output) {
  T.validate();
  T.check_inputs(f);
  const GridSpec& g = T.grid;
  const KernelSpec& K = T.kernel;
  const std::vector<std::size_t> out_cells = cells_of(g, output.intersect(full_box(g)));
  std::vector<double> result(out_cells.size(), 0.0);
  if (K.variant == KernelVariant::Zero) return result;

  std::vector<std::vector<Source>> src;
  for (const auto& fi : f) {
    src.push_back(nonzero_cells(fi, input));
    if (src.back().empty()) return result;
  }
  const double weight = std::pow(g.cell_measure(), K.m);

  parallel_for(out_cells.size(), [&](std::size_t o) {
    const std::size_t xc = out_cells[o];
    const Point x = g.center(xc);
    double sum = 0.0;
    if (K.m == 1) {
      for (const Source& a : src[0]) {
        if (a.cell == xc) continue;
        const Point ys[1] = {a.y};
        const KernelValue kv = eval_kernel(K, x, ys);
        if (kv.singular) continue;
        if (!std::isfinite(kv.value)) {
          const Source* p[1] = {&a};
          non_finite(g, xc, p);
        }
        sum += kv.value * a.value;
      }
    } else {
      for (const Source& a : src[0]) {
        if (a.cell == xc) continue;
        double inner = 0.0;
        for (const Source& b : src[1]) {
          if (b.cell == xc) continue;
          const Point ys[2] = {a.y, b.y};
          const KernelValue kv = eval_kernel(K, x, ys);
          if (kv.singular) continue;
          if (!std::isfinite(kv.value)) {
            const Source* p[2] = {&a, &b};
            non_finite(g, xc, p);
          }
          inner += kv.value * b.value;
        }
        sum += inner * a.value;
      }
    }
    result[o] = sum * weight;
  });
  return result;
}

GridFunction apply(const OperatorSpec& T, std::span<const GridFunction> f) {
  const CellBox all = full_box(T.grid);
  return GridFunction(T.grid, apply_region(T, f, all, all));
}

GridFunction apply_truncated(const OperatorSpec& T, std::span<const GridFunction> f, const CellBox& cube) {
  const TripleCube t = triple_cube(T.grid, cube);
  return GridFunction(T.grid, apply_region(T, f, t.box, full_box(T.grid)));
}

double lp_norm(const GridFunction& f, double p) {
  require(p > 0.0, "lp_norm: p must be positive");
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_measure(), 1.0 / p);
}

double weak_ratio(const GridFunction& g, std::span<const GridFunction> f, double q) {
  require(q > 0.0 && std::isfinite(q), "weak_ratio: q must be positive");
  require(!f.empty(), "weak_ratio: no input functions");
  double denom = 1.0;
  for (const auto& fi : f) {
    require(!fi.is_zero(), "weak_ratio: input function is identically zero");
    denom *= lp_norm(fi, q);
  }
  std::vector<double> levels;
  levels.reserve(g.size());
  for (double v : g.values())
    if (v != 0.0) levels.push_back(std::abs(v));
  std::sort(levels.begin(), levels.end(), std::greater<>());
  const double cell = g.grid().cell_measure();
  const double expo = static_cast<double>(f.size()) / q;
  double best = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    // lambda -> levels[k] from below sees every value >= levels[k]
    if (k + 1 < levels.size() && levels[k + 1] == levels[k]) continue;
    const double meas = static_cast<double>(k + 1) * cell;
    best = std::max(best, levels[k] * std::pow(meas, expo));
  }
  return best / denom;
}

double strong_ratio(const GridFunction& g, std::span<const GridFunction> f, double p, std::span<const double> p_in) {
  require(f.size() == p_in.size(), "strong_ratio: exponent count mismatch");
  double denom = 1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double nrm = lp_norm(f[i], p_in[i]);
    require(nrm > 0.0, "strong_ratio: input function has zero norm");
    denom *= nrm;
  }
  return lp_norm(g, p) / denom;
}

WeakNormReport weak_norm(const OperatorSpec& T, double q, const std::vector<InputTuple>& bank) {
  require(!bank.empty(), "weak_norm: empty bank");
  for (const auto& tuple : bank)
    for (const auto& fi : tuple) require(!fi.is_zero(), "weak_norm: all-zero input in bank");
  WeakNormReport rep;
  rep.q = q;
  rep.bank_size = bank.size();
  for (std::size_t b = 0; b < bank.size(); ++b) {
    const GridFunction out = sdom::apply(T, bank[b]);
    const double ratio = weak_ratio(out, bank[b], q);
    rep.ratios.push_back(ratio);
    if (b == 0 || ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax = b;
    }
  }
  return rep;
}

}  // namespace sdom
