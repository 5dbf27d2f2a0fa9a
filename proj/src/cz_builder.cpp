#include "sdom/cz_builder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace sdom {

namespace {

std::size_t budget(const GridSpec& g, std::size_t cells) { return cells >> (g.n + 2); }

std::size_t count_in(const GridSpec& g, const CellMask& e, const CellBox& b) {
  std::size_t c = 0;
  for_each_cell(g, b, [&](std::size_t i) { c += e[i] ? 1 : 0; });
  return c;
}

std::string cube_str(const DyadicCube& q) {
  return "level " + std::to_string(q.level) + " index (" + std::to_string(q.index[0]) + "," +
         std::to_string(q.index[1]) + ")";
}

}  // namespace

double adaptive_threshold(const GridFunction& s, const DyadicCube& q0) {
  const GridSpec& g = s.grid();
  q0.validate(g);
  std::vector<double> v;
  for_each_cell(g, q0.box(g), [&](std::size_t i) {
    require(s[i] >= 0.0, "adaptive_threshold: s must be nonnegative");
    v.push_back(s[i]);
  });
  const std::size_t b = budget(g, v.size());
  // the (b+1)-th largest value; b < #cells always
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(b), v.end(), std::greater<>());
  return v[b];
}

std::vector<DyadicCube> cz_select(const GridSpec& g, const CellMask& e, const DyadicCube& q0, double lambda) {
  q0.validate(g);
  require(e.size() == g.cell_count(), "cz_select: mask size does not match grid");
  require(lambda > 0.0 && lambda < 1.0, "cz_select: lambda must lie in (0, 1)");
  const CellBox qb = q0.box(g);
  const std::size_t inside = count_in(g, e, qb);
  std::size_t total = 0;
  for (char c : e) total += c ? 1 : 0;
  if (total != inside) fail(ErrorCode::Precondition, "cz_select: E is not contained in Q0");
  if (inside > budget(g, qb.count()))
    fail(ErrorCode::Precondition, "cz_select: |E| exceeds 2^-(n+2)|Q0|; threshold first");

  std::vector<DyadicCube> out;
  std::function<void(const DyadicCube&)> descend = [&](const DyadicCube& q) {
    for (const DyadicCube& p : children(g, q)) {
      const CellBox pb = p.box(g);
      const std::size_t hit = count_in(g, e, pb);
      if (hit == 0) continue;
      if (static_cast<double>(hit) > lambda * static_cast<double>(pb.count()))
        out.push_back(p);
      else
        descend(p);  // a single E cell has density 1 > lambda, so this never reaches below a leaf
    }
  };
  if (inside > 0) descend(q0);
  std::sort(out.begin(), out.end());
  return out;
}

BuildResult build_sparse_family(const OperatorSpec& T, std::span<const GridFunction> f, const DyadicCube& root,
                                double r, CubeFamilyMode mode, int max_depth) {
  T.validate();
  T.check_inputs(f);
  require(std::isfinite(r) && r >= 1.0, "build_sparse_family: r must be >= 1");
  const GridSpec& g = T.grid;
  root.validate(g);
  const CellBox rb = root.box(g);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!rb.contains(f[i].support_box()))
      fail(ErrorCode::Precondition, "build_sparse_family: support of f_" + std::to_string(i + 1) +
                                        " is not inside the root cube " + cube_str(root));
  if (triple_cube(g, root).clipped)
    fail(ErrorCode::Precondition, "build_sparse_family: the triple of the root cube " + cube_str(root) +
                                      " is clipped by the domain");
  if (max_depth <= 0) max_depth = 2 * g.L;
  const double lambda = 1.0 / static_cast<double>(1 << (g.n + 1));

  BuildResult res;
  res.family.grid = g;
  res.family.gamma = 0.5;

  std::function<void(const DyadicCube&, int)> node = [&](const DyadicCube& q0, int depth) {
    if (depth > max_depth)
      fail(ErrorCode::DepthExceeded, "build_sparse_family: depth cap exceeded at " + cube_str(q0));
    const CellBox qb = q0.box(g);
    const CellBox tb = triple_cube(g, q0).box;
    double a = 1.0;
    for (const auto& fi : f) a *= local_average(fi, tb, r);
    if (a == 0.0) return;

    BuilderNodeStats st;
    st.cube = q0;
    st.A = a;
    st.cube_cells = qb.count();
    if (q0.level == g.L) {
      res.family.entries.push_back({q0, cells_of(g, qb), 0.0});
      res.stats.push_back(st);
      return;
    }

    const GridFunction lgm = local_grand_maximal(T, f, q0, mode);
    GridFunction s(g, 0.0);
    for_each_cell(g, qb, [&](std::size_t i) {
      double p = 1.0;
      for (const auto& fi : f) p *= fi[i];
      s[i] = std::max(std::abs(p), lgm[i]) / a;
    });
    const double tau = adaptive_threshold(s, q0);
    CellMask e(g.cell_count(), 0);
    for_each_cell(g, qb, [&](std::size_t i) {
      if (s[i] > tau) {
        e[i] = 1;
        ++st.e_cells;
      }
    });
    st.tau = tau;
    st.selected = cz_select(g, e, q0, lambda);

    CellMask covered(g.cell_count(), 0);
    for (const DyadicCube& p : st.selected) {
      const CellBox pb = p.box(g);
      st.selected_cells += pb.count();
      for_each_cell(g, pb, [&](std::size_t i) { covered[i] = 1; });
    }
    st.sum_pj_ratio = static_cast<double>(st.selected_cells) / static_cast<double>(st.cube_cells);
    SparseEntry entry{q0, {}, tau};
    for_each_cell(g, qb, [&](std::size_t i) {
      if (!covered[i]) entry.witness.push_back(i);
    });
    res.family.entries.push_back(std::move(entry));
    const std::vector<DyadicCube> next = st.selected;
    res.stats.push_back(std::move(st));
    for (const DyadicCube& p : next) node(p, depth + 1);
  };
  node(root, 0);

  res.family.canonicalize();
  std::sort(res.stats.begin(), res.stats.end(),
            [](const BuilderNodeStats& a, const BuilderNodeStats& b) { return a.cube < b.cube; });
  return res;
}

PointwiseCheck lemma_pointwise_check(const OperatorSpec& T, std::span<const GridFunction> f, const DyadicCube& q0,
                                     CubeFamilyMode mode) {
  T.validate();
  T.check_inputs(f);
  const GridSpec& g = T.grid;
  q0.validate(g);
  const CellBox qb = q0.box(g);
  const std::vector<double> tt = apply_region(T, f, triple_cube(g, q0).box, qb);
  const GridFunction lgm = local_grand_maximal(T, f, q0, mode);

  double scale = 0.0;
  for (double v : tt) scale = std::max(scale, std::abs(v));
  PointwiseCheck out;
  std::size_t k = 0;
  for_each_cell(g, qb, [&](std::size_t i) {
    const double num = std::max(0.0, std::abs(tt[k++]) - lgm[i]);
    double den = 1.0;
    for (const auto& fi : f) den *= std::abs(fi[i]);
    if (den == 0.0) {
      if (num > 1e-12 * scale) out.infinite_flag = true;
      return;
    }
    const double ratio = num / den;
    if (ratio > out.c_emp) {
      out.c_emp = ratio;
      out.argmax = i;
    }
  });
  return out;
}

DominationReport domination_constant(const OperatorSpec& T, std::span<const GridFunction> f, const SparseFamily& s,
                                     double r) {
  T.validate();
  T.check_inputs(f);
  require(s.grid == T.grid, "domination_constant: family is on a different grid");
  const GridSpec& g = T.grid;
  DominationReport out;
  CellBox rb = full_box(g);
  if (!s.entries.empty()) {
    out.root = std::min_element(s.entries.begin(), s.entries.end(), [](const auto& a, const auto& b) {
                 return a.cube < b.cube;
               })->cube;
    rb = out.root.box(g);
  }
  const GridFunction tf = sdom::apply(T, f);
  const GridFunction se = sparse_eval(s, f, r);
  double scale = 0.0;
  for_each_cell(g, rb, [&](std::size_t i) { scale = std::max(scale, std::abs(tf[i])); });
  for_each_cell(g, rb, [&](std::size_t i) {
    const double num = std::abs(tf[i]);
    if (se[i] > 0.0) {
      const double ratio = num / se[i];
      if (ratio > out.c_emp) {
        out.c_emp = ratio;
        out.argmax_cell = i;
      }
    } else if (num > 1e-12 * scale) {
      out.support_flag = true;
    }
  });
  return out;
}

}  // namespace sdom
