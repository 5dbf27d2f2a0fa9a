#include "sdom/maximal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace sdom {

std::string mode_name(CubeFamilyMode m) {
  switch (m) {
    case CubeFamilyMode::AllGridCubes: return "all";
    case CubeFamilyMode::Dyadic: return "dyadic";
    case CubeFamilyMode::DyadicShifted: return "shifted";
  }
  return "unknown";
}

CubeFamilyMode parse_mode(const std::string& s) {
  if (s == "all" || s == "all_grid_cubes") return CubeFamilyMode::AllGridCubes;
  if (s == "dyadic") return CubeFamilyMode::Dyadic;
  if (s == "shifted" || s == "dyadic_shifted") return CubeFamilyMode::DyadicShifted;
  fail(ErrorCode::InvalidArgument, "unknown cube family mode '" + s + "'");
}

namespace {

CellBox make_cube(const GridSpec& g, int c0, int c1, int s) {
  return CellBox{{c0, g.n == 2 ? c1 : 0}, {c0 + s, g.n == 2 ? c1 + s : 1}};
}

void all_cubes_in(const GridSpec& g, const CellBox& w, std::vector<CellBox>& out) {
  const int w0 = w.hi[0] - w.lo[0];
  const int w1 = g.n == 2 ? w.hi[1] - w.lo[1] : w0;
  const int smax = std::min(w0, w1);
  for (int s = 1; s <= smax; ++s)
    for (int a = w.lo[0]; a + s <= w.hi[0]; ++a) {
      if (g.n == 1) {
        out.push_back(make_cube(g, a, 0, s));
      } else {
        for (int b = w.lo[1]; b + s <= w.hi[1]; ++b) out.push_back(make_cube(g, a, b, s));
      }
    }
}

void dyadic_cubes_in(const GridSpec& g, const CellBox& w, std::vector<CellBox>& out) {
  for (int lvl = 0; lvl <= g.L; ++lvl) {
    const int s = 1 << (g.L - lvl);
    for (int a = 0; a < (1 << lvl); ++a) {
      if (g.n == 1) {
        const CellBox c = make_cube(g, a * s, 0, s);
        if (w.contains(c)) out.push_back(c);
      } else {
        for (int b = 0; b < (1 << lvl); ++b) {
          const CellBox c = make_cube(g, a * s, b * s, s);
          if (w.contains(c)) out.push_back(c);
        }
      }
    }
  }
}

void shifted_cubes(const GridSpec& g, std::vector<CellBox>& out) {
  const int N = g.cells_per_side();
  std::set<std::tuple<int, int, int>> seen;
  for (const CellBox& c : out) seen.insert({c.hi[0] - c.lo[0], c.lo[0], c.lo[1]});
  for (int third = 1; third <= 2; ++third) {
    for (int lvl = 0; lvl <= g.L; ++lvl) {
      const int s = N >> lvl;
      const double sign = (lvl % 2 == 0) ? 1.0 : -1.0;
      const long shift_raw = std::lround(sign * third * s / 3.0);
      const int shift = static_cast<int>(((shift_raw % s) + s) % s);
      if (shift == 0) continue;
      for (int a = shift - s; a + s <= N; a += s) {
        if (a < 0) continue;
        if (g.n == 1) {
          if (seen.insert({s, a, 0}).second) out.push_back(make_cube(g, a, 0, s));
        } else {
          for (int b = shift - s; b + s <= N; b += s) {
            if (b < 0) continue;
            if (seen.insert({s, a, b}).second) out.push_back(make_cube(g, a, b, s));
          }
        }
      }
    }
  }
}

/// Each cube's value is computed in parallel; the scatter-max runs in family
/// order, so the output does not depend on the worker count.
GridFunction scatter_max(const GridSpec& g, const std::vector<CellBox>& cubes, const std::vector<double>& vals) {
  GridFunction out(g, 0.0);
  auto& v = out.values();
  for (std::size_t c = 0; c < cubes.size(); ++c)
    for_each_cell(g, cubes[c], [&](std::size_t i) { v[i] = std::max(v[i], vals[c]); });
  return out;
}

double abs_average(const GridFunction& f, const CellBox& b) {
  return box_power_sum(f, b, 1.0) / static_cast<double>(b.count());
}

}  // namespace

std::vector<CellBox> cube_family(const GridSpec& g, CubeFamilyMode mode) {
  return cube_family_within(g, mode, full_box(g));
}

std::vector<CellBox> cube_family_within(const GridSpec& g, CubeFamilyMode mode, const CellBox& within) {
  std::vector<CellBox> out;
  const CellBox w = within.intersect(full_box(g));
  switch (mode) {
    case CubeFamilyMode::AllGridCubes:
      all_cubes_in(g, w, out);
      break;
    case CubeFamilyMode::Dyadic:
      dyadic_cubes_in(g, w, out);
      break;
    case CubeFamilyMode::DyadicShifted: {
      std::vector<CellBox> all;
      dyadic_cubes_in(g, full_box(g), all);
      shifted_cubes(g, all);
      for (const CellBox& c : all)
        if (w.contains(c)) out.push_back(c);
      break;
    }
  }
  return out;
}

GridFunction multilinear_maximal(std::span<const GridFunction> f, CubeFamilyMode mode) {
  require(!f.empty(), "multilinear_maximal: no input functions");
  const GridSpec& g = f[0].grid();
  for (const auto& fi : f) require(fi.grid() == g, "multilinear_maximal: inputs on different grids");
  const auto cubes = cube_family(g, mode);
  std::vector<double> vals(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t c) {
    double p = 1.0;
    for (const auto& fi : f) p *= abs_average(fi, cubes[c]);
    vals[c] = p;
  });
  return scatter_max(g, cubes, vals);
}

GridFunction m_delta(const GridFunction& g, double delta, CubeFamilyMode mode) {
  require(std::isfinite(delta) && delta > 0.0, "m_delta: delta must be positive");
  GridFunction powered(g.grid(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) powered[i] = std::pow(std::abs(g[i]), delta);
  const GridFunction one[1] = {powered};
  GridFunction out = multilinear_maximal(one, mode);
  for (double& v : out.values()) v = std::pow(v, 1.0 / delta);
  return out;
}

namespace {

double residual_on(const OperatorSpec& T, std::span<const GridFunction> f, const CellBox& q,
                   const std::vector<double>& reference, const CellBox& ref_box) {
  const TripleCube t = triple_cube(T.grid, q);
  const std::vector<double> trunc = apply_region(T, f, t.box, q);
  double best = 0.0;
  std::size_t k = 0;
  const int ref_w1 = ref_box.hi[1] - ref_box.lo[1];
  for (int i = q.lo[0]; i < q.hi[0]; ++i)
    for (int j = q.lo[1]; j < q.hi[1]; ++j, ++k) {
      const std::size_t r = static_cast<std::size_t>(i - ref_box.lo[0]) * ref_w1 + (j - ref_box.lo[1]);
      best = std::max(best, std::abs(reference[r] - trunc[k]));
    }
  return best;
}

}  // namespace

GridFunction grand_maximal(const OperatorSpec& T, std::span<const GridFunction> f, CubeFamilyMode mode) {
  T.validate();
  T.check_inputs(f);
  const CellBox all = full_box(T.grid);
  const std::vector<double> full = apply_region(T, f, all, all);
  const auto cubes = cube_family(T.grid, mode);
  std::vector<double> vals(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t c) { vals[c] = residual_on(T, f, cubes[c], full, all); });
  return scatter_max(T.grid, cubes, vals);
}

GridFunction local_grand_maximal(const OperatorSpec& T, std::span<const GridFunction> f, const DyadicCube& q0,
                                 CubeFamilyMode mode) {
  T.validate();
  T.check_inputs(f);
  q0.validate(T.grid);
  const CellBox root = q0.box(T.grid);
  const TripleCube t0 = triple_cube(T.grid, root);
  const std::vector<double> base = apply_region(T, f, t0.box, root);
  const auto cubes = cube_family_within(T.grid, mode, root);
  std::vector<double> vals(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t c) { vals[c] = residual_on(T, f, cubes[c], base, root); });
  return scatter_max(T.grid, cubes, vals);
}

BoundCheck mt_pointwise_bound_check(const OperatorSpec& T, std::span<const GridFunction> f, double r, double k_r,
                                    CubeFamilyMode mode) {
  require(std::isfinite(r) && r >= 1.0, "mt_pointwise_bound_check: r must be >= 1");
  BoundCheck out;
  out.k_r = k_r;
  const GridFunction mt = grand_maximal(T, f, mode);
  const GridFunction tf = sdom::apply(T, f);
  const GridFunction mr4 = m_delta(tf, r / 4.0, mode);
  std::vector<GridFunction> powered;
  for (const auto& fi : f) {
    GridFunction p(fi.grid(), 0.0);
    for (std::size_t i = 0; i < fi.size(); ++i) p[i] = std::pow(std::abs(fi[i]), r);
    powered.push_back(std::move(p));
  }
  const GridFunction mf = multilinear_maximal(powered, mode);
  double scale = 0.0;
  for (double v : mt.values()) scale = std::max(scale, v);
  for (std::size_t i = 0; i < mt.size(); ++i) {
    const double num = std::max(0.0, mt[i] - mr4[i]);
    const double den = std::pow(mf[i], 1.0 / r);
    if (den > 0.0) {
      const double ratio = num / den;
      if (ratio > out.c_emp) {
        out.c_emp = ratio;
        out.argmax = i;
      }
    } else if (num > 1e-12 * scale) {
      out.infinite_flag = true;
    }
  }
  return out;
}

}  // namespace sdom
