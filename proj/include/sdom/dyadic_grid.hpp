#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sdom/common.hpp"

namespace sdom {

using CellCoord = std::array<int, 2>;

/// Dyadic discretization of origin + [0, side)^n with 2^L cells per side.
/// Cell (c0, c1) has linear index c0 * 2^L + c1 (row-major, axis 0 slowest).
struct GridSpec {
  int n = 1;
  int L = 1;
  Point origin{0.0, 0.0};
  double side = 1.0;

  /// Validating constructor; throws on n, L or side out of range.
  static GridSpec make(int n, int L, Point origin = {0.0, 0.0}, double side = 1.0);
  void validate() const;

  [[nodiscard]] int cells_per_side() const { return 1 << L; }
  [[nodiscard]] double cell_size() const { return side / static_cast<double>(cells_per_side()); }
  [[nodiscard]] double cell_measure() const;
  [[nodiscard]] std::size_t cell_count() const;
  [[nodiscard]] std::size_t index(CellCoord c) const {
    return n == 1 ? static_cast<std::size_t>(c[0])
                  : static_cast<std::size_t>(c[0]) * static_cast<std::size_t>(cells_per_side()) +
                        static_cast<std::size_t>(c[1]);
  }
  [[nodiscard]] CellCoord coords(std::size_t idx) const {
    if (n == 1) return {static_cast<int>(idx), 0};
    const auto N = static_cast<std::size_t>(cells_per_side());
    return {static_cast<int>(idx / N), static_cast<int>(idx % N)};
  }
  [[nodiscard]] Point center(CellCoord c) const {
    const double h = cell_size();
    Point p{origin[0] + (c[0] + 0.5) * h, 0.0};
    if (n == 2) p[1] = origin[1] + (c[1] + 0.5) * h;
    return p;
  }
  [[nodiscard]] Point center(std::size_t idx) const { return center(coords(idx)); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Half-open box of cells [lo, hi) per axis. For n = 1 the second axis is [0, 1).
struct CellBox {
  CellCoord lo{0, 0};
  CellCoord hi{0, 1};

  [[nodiscard]] bool empty() const { return hi[0] <= lo[0] || hi[1] <= lo[1]; }
  [[nodiscard]] std::size_t count() const {
    return empty() ? 0
                   : static_cast<std::size_t>(hi[0] - lo[0]) * static_cast<std::size_t>(hi[1] - lo[1]);
  }
  [[nodiscard]] bool contains(CellCoord c) const {
    return c[0] >= lo[0] && c[0] < hi[0] && c[1] >= lo[1] && c[1] < hi[1];
  }
  [[nodiscard]] bool contains(const CellBox& b) const {
    return b.empty() || (b.lo[0] >= lo[0] && b.hi[0] <= hi[0] && b.lo[1] >= lo[1] && b.hi[1] <= hi[1]);
  }
  [[nodiscard]] CellBox intersect(const CellBox& b) const;

  friend bool operator==(const CellBox&, const CellBox&) = default;
};

[[nodiscard]] CellBox full_box(const GridSpec& g);

/// Visits the cells of a box in increasing linear-index order.
template <class Fn>
void for_each_cell(const GridSpec& g, const CellBox& b, Fn&& fn) {
  if (b.empty()) return;
  for (int i = b.lo[0]; i < b.hi[0]; ++i)
    for (int j = b.lo[1]; j < b.hi[1]; ++j) fn(g.index(CellCoord{i, j}));
}

[[nodiscard]] std::vector<std::size_t> cells_of(const GridSpec& g, const CellBox& b);

/// Dyadic cube of generation `level`; index in [0, 2^level)^n.
struct DyadicCube {
  int level = 0;
  CellCoord index{0, 0};

  [[nodiscard]] CellBox box(const GridSpec& g) const;
  [[nodiscard]] int side_cells(const GridSpec& g) const { return 1 << (g.L - level); }
  void validate(const GridSpec& g) const;

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

/// Arbitrary grid-aligned cube: corner cell and side length in cells.
struct GridCube {
  CellCoord corner{0, 0};
  int side = 1;

  [[nodiscard]] CellBox box(const GridSpec& g) const;
  void validate(const GridSpec& g) const;

  friend bool operator==(const GridCube&, const GridCube&) = default;
};

struct TripleCube {
  CellBox box;
  bool clipped = false;
};

/// The 2^n dyadic children. Throws ErrorCode::LeafCube at level L.
[[nodiscard]] std::vector<DyadicCube> children(const GridSpec& g, const DyadicCube& q);

/// Concentric cube of three times the side, clipped to the grid.
/// `cube` must have equal side lengths on every axis.
[[nodiscard]] TripleCube triple_cube(const GridSpec& g, const CellBox& cube);
[[nodiscard]] TripleCube triple_cube(const GridSpec& g, const DyadicCube& q);
[[nodiscard]] TripleCube triple_cube(const GridSpec& g, const GridCube& q);

/// Piecewise-constant function, one finite value per cell.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const GridSpec& g, double fill = 0.0);
  GridFunction(const GridSpec& g, std::vector<double> values);

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::vector<double>& values() { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] double& operator[](std::size_t i) { return values_[i]; }

  /// True when every value is finite.
  [[nodiscard]] bool finite() const;
  [[nodiscard]] bool is_zero() const;
  /// Same function with all cells outside `b` set to zero.
  [[nodiscard]] GridFunction restricted(const CellBox& b) const;
  /// Smallest box containing every nonzero cell (empty box if f == 0).
  [[nodiscard]] CellBox support_box() const;

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Plain sum of |f|^r over the cells of b, in index order.
[[nodiscard]] double box_power_sum(const GridFunction& f, const CellBox& b, double r);

/// ((1/#cells(b)) sum_{cells in b} |f|^r)^(1/r). Requires r >= 1 and b non-empty.
[[nodiscard]] double local_average(const GridFunction& f, const CellBox& b, double r);

/// ((1/#cells(measure)) sum_{cells in region} |f|^r)^(1/r): the average of f over a
/// region (typically 3Q) normalized by the measure of a different cube Q.
[[nodiscard]] double local_average_normalized(const GridFunction& f, const CellBox& region,
                                              const CellBox& measure, double r);

}  // namespace sdom
