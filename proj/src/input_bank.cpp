#include "sdom/input_bank.hpp"

#include <algorithm>
#include <cmath>

namespace sdom {

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  std::uint64_t z = seed_ + counter * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

CounterRng CounterRng::split(std::uint64_t stream) const {
  return CounterRng(bits(0xD1B54A32D192ED03ULL ^ stream));
}

std::string shape_name(InputShape s) {
  switch (s) {
    case InputShape::Spike: return "spike";
    case InputShape::Indicator: return "indicator";
    case InputShape::Gauss: return "gauss";
    case InputShape::Rademacher: return "rademacher";
  }
  return "unknown";
}

InputShape parse_shape(const std::string& s) {
  if (s == "spike") return InputShape::Spike;
  if (s == "indicator") return InputShape::Indicator;
  if (s == "gauss") return InputShape::Gauss;
  if (s == "rademacher") return InputShape::Rademacher;
  fail(ErrorCode::InvalidArgument, "unknown input shape '" + s + "'");
}

CellBox rel_to_cells(const GridSpec& g, const RelBox& b) {
  const double N = g.cells_per_side();
  CellBox out;
  for (int a = 0; a < 2; ++a) {
    if (a >= g.n) {
      out.lo[a] = 0;
      out.hi[a] = 1;
      continue;
    }
    out.lo[a] = std::clamp(static_cast<int>(std::ceil(b.lo[a] * N - 0.5)), 0, static_cast<int>(N));
    out.hi[a] = std::clamp(static_cast<int>(std::ceil(b.hi[a] * N - 0.5)), 0, static_cast<int>(N));
  }
  return out;
}

namespace {

Point rel_center(const GridSpec& g, std::size_t idx) {
  const CellCoord c = g.coords(idx);
  const double N = g.cells_per_side();
  return {(c[0] + 0.5) / N, g.n == 2 ? (c[1] + 0.5) / N : 0.0};
}

std::size_t containing_cell(const GridSpec& g, const Point& rel) {
  const int N = g.cells_per_side();
  CellCoord c{0, 0};
  for (int a = 0; a < g.n; ++a) c[a] = std::clamp(static_cast<int>(std::floor(rel[a] * N)), 0, N - 1);
  return g.index(c);
}

GridFunction make_input(const GridSpec& g, InputShape shape, const Point& c, double width, double amp,
                        const CounterRng& rng) {
  GridFunction f(g, 0.0);
  auto& v = f.values();
  auto in_box = [&](const Point& p) {
    for (int a = 0; a < g.n; ++a)
      if (std::abs(p[a] - c[a]) > width / 2.0) return false;
    return true;
  };
  switch (shape) {
    case InputShape::Spike:
      v[containing_cell(g, c)] = amp;
      break;
    case InputShape::Indicator:
    case InputShape::Rademacher: {
      bool any = false;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!in_box(rel_center(g, i))) continue;
        any = true;
        v[i] = amp;
      }
      if (!any) v[containing_cell(g, c)] = amp;
      if (shape == InputShape::Rademacher)
        for (std::size_t i = 0; i < v.size(); ++i)
          if (v[i] != 0.0 && rng.uniform(i) < 0.5) v[i] = -v[i];
      break;
    }
    case InputShape::Gauss:
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Point p = rel_center(g, i);
        double d2 = 0.0;
        for (int a = 0; a < g.n; ++a) d2 += (p[a] - c[a]) * (p[a] - c[a]);
        // cut off at 4 widths so the bump has compact support
        v[i] = d2 > 16.0 * width * width ? 0.0 : amp * std::exp(-d2 / (2.0 * width * width));
      }
      break;
  }
  return f;
}

}  // namespace

std::vector<InputTuple> generate_bank(const std::vector<BankEntry>& entries, const GridSpec& g, int m) {
  require(m >= 1, "generate_bank: m must be >= 1");
  std::vector<InputTuple> bank;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const BankEntry& be = entries[e];
    require(be.count >= 1, "bank entry count must be >= 1");
    require(be.width > 0.0 && std::isfinite(be.width), "bank entry width must be positive");
    require(std::isfinite(be.amplitude) && be.amplitude != 0.0, "bank entry amplitude must be nonzero");
    const CounterRng base(be.seed);
    const RelBox sup = be.support.value_or(RelBox{});
    for (int inst = 0; inst < be.count; ++inst) {
      const CounterRng rng = base.split(static_cast<std::uint64_t>(inst));
      Point center = be.center;
      double width = be.width;
      if (inst > 0) {
        for (int a = 0; a < g.n; ++a) center[a] = sup.lo[a] + (sup.hi[a] - sup.lo[a]) * rng.uniform(a);
        width *= 0.5 + rng.uniform(7);
      }
      InputTuple tuple;
      for (int slot = 0; slot < m; ++slot) {
        Point c = center;
        for (int a = 0; a < g.n; ++a) c[a] += slot * be.offset[a];
        GridFunction f = make_input(g, be.shape, c, width, be.amplitude, rng.split(100 + slot));
        if (be.support) f = f.restricted(rel_to_cells(g, *be.support));
        tuple.push_back(std::move(f));
      }
      bank.push_back(std::move(tuple));
    }
  }
  return bank;
}

std::vector<BankEntry> curated_bank(const RelBox& support, int per_shape, std::uint64_t seed) {
  std::vector<BankEntry> out;
  const InputShape shapes[] = {InputShape::Spike, InputShape::Indicator, InputShape::Gauss, InputShape::Rademacher};
  for (std::size_t s = 0; s < 4; ++s) {
    BankEntry e;
    e.shape = shapes[s];
    e.center = {(support.lo[0] + support.hi[0]) / 2.0, (support.lo[1] + support.hi[1]) / 2.0};
    e.width = (support.hi[0] - support.lo[0]) / 4.0;
    e.support = support;
    e.count = per_shape;
    e.seed = seed + s;
    out.push_back(e);
  }
  return out;
}

}  // namespace sdom
