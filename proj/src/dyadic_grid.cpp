#include "sdom/dyadic_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdom {

GridSpec GridSpec::make(int n, int L, Point origin, double side) {
  GridSpec g;
  g.n = n;
  g.L = L;
  g.origin = origin;
  if (n == 1) g.origin[1] = 0.0;
  g.side = side;
  g.validate();
  return g;
}

void GridSpec::validate() const {
  require(n == 1 || n == 2, "grid.n must be 1 or 2");
  const int max_depth = n == 1 ? 14 : 8;
  require(L >= 1 && L <= max_depth, "grid.L must lie in [1, " + std::to_string(max_depth) + "] for n = " +
                                        std::to_string(n));
  require(std::isfinite(side) && side > 0.0, "grid.side must be positive and finite");
  require(std::isfinite(origin[0]) && std::isfinite(origin[1]), "grid.origin must be finite");
}

double GridSpec::cell_measure() const {
  const double h = cell_size();
  return n == 1 ? h : h * h;
}

std::size_t GridSpec::cell_count() const {
  const auto N = static_cast<std::size_t>(cells_per_side());
  return n == 1 ? N : N * N;
}

CellBox CellBox::intersect(const CellBox& b) const {
  CellBox out;
  for (int a = 0; a < 2; ++a) {
    out.lo[a] = std::max(lo[a], b.lo[a]);
    out.hi[a] = std::min(hi[a], b.hi[a]);
  }
  return out;
}

CellBox full_box(const GridSpec& g) {
  const int N = g.cells_per_side();
  return CellBox{{0, 0}, {N, g.n == 2 ? N : 1}};
}

std::vector<std::size_t> cells_of(const GridSpec& g, const CellBox& b) {
  std::vector<std::size_t> out;
  out.reserve(b.count());
  for_each_cell(g, b, [&](std::size_t i) { out.push_back(i); });
  return out;
}

CellBox DyadicCube::box(const GridSpec& g) const {
  const int s = side_cells(g);
  CellBox b;
  b.lo = {index[0] * s, g.n == 2 ? index[1] * s : 0};
  b.hi = {b.lo[0] + s, g.n == 2 ? b.lo[1] + s : 1};
  return b;
}

void DyadicCube::validate(const GridSpec& g) const {
  require(level >= 0 && level <= g.L, "dyadic cube level out of range");
  const int count = 1 << level;
  for (int a = 0; a < g.n; ++a)
    require(index[a] >= 0 && index[a] < count, "dyadic cube index out of range");
  if (g.n == 1) require(index[1] == 0, "dyadic cube index[1] must be 0 for n = 1");
}

CellBox GridCube::box(const GridSpec& g) const {
  CellBox b;
  b.lo = {corner[0], g.n == 2 ? corner[1] : 0};
  b.hi = {corner[0] + side, g.n == 2 ? corner[1] + side : 1};
  return b;
}

void GridCube::validate(const GridSpec& g) const {
  require(side >= 1, "grid cube side must be >= 1");
  const int N = g.cells_per_side();
  for (int a = 0; a < g.n; ++a)
    require(corner[a] >= 0 && corner[a] + side <= N, "grid cube must fit inside the grid");
}

std::vector<DyadicCube> children(const GridSpec& g, const DyadicCube& q) {
  q.validate(g);
  if (q.level >= g.L) fail(ErrorCode::LeafCube, "leaf cube has no children");
  std::vector<DyadicCube> out;
  const int lvl = q.level + 1;
  if (g.n == 1) {
    out.push_back({lvl, {2 * q.index[0], 0}});
    out.push_back({lvl, {2 * q.index[0] + 1, 0}});
  } else {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out.push_back({lvl, {2 * q.index[0] + a, 2 * q.index[1] + b}});
  }
  return out;
}

TripleCube triple_cube(const GridSpec& g, const CellBox& cube) {
  const int s = cube.hi[0] - cube.lo[0];
  require(s >= 1, "triple_cube: empty cube");
  require(g.n == 1 || cube.hi[1] - cube.lo[1] == s, "triple_cube: box is not a cube");
  require(full_box(g).contains(cube), "triple_cube: cube must lie inside the grid");
  CellBox t;
  t.lo = {cube.lo[0] - s, g.n == 2 ? cube.lo[1] - s : 0};
  t.hi = {cube.hi[0] + s, g.n == 2 ? cube.hi[1] + s : 1};
  const CellBox clipped = t.intersect(full_box(g));
  return TripleCube{clipped, !(clipped == t)};
}

TripleCube triple_cube(const GridSpec& g, const DyadicCube& q) {
  q.validate(g);
  return triple_cube(g, q.box(g));
}

TripleCube triple_cube(const GridSpec& g, const GridCube& q) {
  q.validate(g);
  return triple_cube(g, q.box(g));
}

GridFunction::GridFunction(const GridSpec& g, double fill) : grid_(g), values_(g.cell_count(), fill) {
  g.validate();
  require(std::isfinite(fill), "grid function values must be finite");
}

GridFunction::GridFunction(const GridSpec& g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
  g.validate();
  require(values_.size() == g.cell_count(), "grid function length does not match the grid");
  require(finite(), "grid function values must be finite");
}

bool GridFunction::finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GridFunction GridFunction::restricted(const CellBox& b) const {
  GridFunction out(grid_, 0.0);
  for_each_cell(grid_, b.intersect(full_box(grid_)), [&](std::size_t i) { out.values_[i] = values_[i]; });
  return out;
}

CellBox GridFunction::support_box() const {
  CellBox b{{1 << 30, 1 << 30}, {-1, -1}};
  bool any = false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 0.0) continue;
    any = true;
    const CellCoord c = grid_.coords(i);
    for (int a = 0; a < 2; ++a) {
      b.lo[a] = std::min(b.lo[a], c[a]);
      b.hi[a] = std::max(b.hi[a], c[a] + 1);
    }
  }
  if (!any) return CellBox{{0, 0}, {0, 0}};
  return b;
}

double box_power_sum(const GridFunction& f, const CellBox& b, double r) {
  double sum = 0.0;
  const auto& v = f.values();
  if (r == 1.0) {
    for_each_cell(f.grid(), b, [&](std::size_t i) { sum += std::abs(v[i]); });
  } else if (r == 2.0) {
    for_each_cell(f.grid(), b, [&](std::size_t i) { sum += v[i] * v[i]; });
  } else {
    for_each_cell(f.grid(), b, [&](std::size_t i) { sum += std::pow(std::abs(v[i]), r); });
  }
  return sum;
}

namespace {
double root(double mean, double r) {
  if (r == 1.0) return mean;
  if (r == 2.0) return std::sqrt(mean);
  return std::pow(mean, 1.0 / r);
}
}  // namespace

double local_average(const GridFunction& f, const CellBox& b, double r) {
  require(r >= 1.0, "local_average: r must be >= 1");
  require(!b.empty(), "local_average: empty cube");
  return root(box_power_sum(f, b, r) / static_cast<double>(b.count()), r);
}

double local_average_normalized(const GridFunction& f, const CellBox& region, const CellBox& measure, double r) {
  require(r >= 1.0, "local_average: r must be >= 1");
  require(!measure.empty(), "local_average: empty measuring cube");
  return root(box_power_sum(f, region, r) / static_cast<double>(measure.count()), r);
}

}  // namespace sdom
