#include "sdom/weight_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdom {

void WeightTuple::validate() const {
  require(!w.empty(), "WeightTuple: at least one weight is required");
  require(w.size() == p.size(), "WeightTuple: need one exponent p_i per weight");
  require(std::isfinite(r) && r >= 1.0, "WeightTuple: r must be >= 1");
  for (std::size_t i = 0; i < w.size(); ++i) {
    require(std::isfinite(p[i]) && p[i] > r, "WeightTuple: p_i must exceed r (i = " + std::to_string(i + 1) + ")");
    require(w[i].grid() == w[0].grid(), "WeightTuple: weights live on different grids");
    for (double x : w[i].values())
      require(std::isfinite(x) && x > 0.0, "WeightTuple: weights must be strictly positive and finite");
  }
}

double WeightTuple::p_total() const {
  double inv = 0.0;
  for (double pi : p) inv += 1.0 / pi;
  return 1.0 / inv;
}

GridFunction WeightTuple::v() const {
  const double pt = p_total();
  GridFunction out(w[0].grid(), 1.0);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t c = 0; c < out.size(); ++c) out[c] *= std::pow(w[i][c], pt / p[i]);
  return out;
}

GridFunction power_weight(const GridSpec& g, const Point& c, double alpha) {
  require(std::isfinite(alpha), "power_weight: alpha must be finite");
  GridFunction out(g, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Point x = g.center(i);
    const double d = std::hypot(x[0] - c[0], g.n == 2 ? x[1] - c[1] : 0.0);
    out[i] = std::max(std::pow(d, alpha), kWeightFloor);
  }
  return out;
}

GridFunction constant_weight(const GridSpec& g, double value) {
  require(std::isfinite(value) && value > 0.0, "constant_weight: value must be positive");
  return GridFunction(g, value);
}

double vec_ap_characteristic(const WeightTuple& W, CubeFamilyMode mode) {
  W.validate();
  const GridSpec& g = W.w[0].grid();
  const double pt = W.p_total();
  const GridFunction v = W.v();
  std::vector<GridFunction> dual;
  std::vector<double> outer;
  for (std::size_t i = 0; i < W.w.size(); ++i) {
    const double pi = W.p[i];
    GridFunction d(g, 0.0);
    for (std::size_t c = 0; c < d.size(); ++c) d[c] = std::pow(W.w[i][c], -W.r / (pi - W.r));
    dual.push_back(std::move(d));
    outer.push_back(pt * (pi - W.r) / (pi * W.r));
  }
  const std::vector<CellBox> cubes = cube_family(g, mode);
  std::vector<double> vals(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t k) {
    const CellBox& b = cubes[k];
    const double cnt = static_cast<double>(b.count());
    double val = box_power_sum(v, b, 1.0) / cnt;
    for (std::size_t i = 0; i < dual.size(); ++i) val *= std::pow(box_power_sum(dual[i], b, 1.0) / cnt, outer[i]);
    vals[k] = val;
  });
  double best = 0.0;
  for (double x : vals) best = std::max(best, x);
  return best;
}

double characteristic_exponent(const WeightTuple& W) {
  const double pt = W.p_total();
  double e = 1.0;
  for (double pi : W.p) {
    const double s = pi / W.r;
    e = std::max(e, (s / (s - 1.0)) / pt);
  }
  return e;
}

double weighted_lp_norm(const GridFunction& g, const GridFunction& weight, double p) {
  require(g.grid() == weight.grid(), "weighted_lp_norm: grids differ");
  require(std::isfinite(p) && p > 0.0, "weighted_lp_norm: p must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += std::pow(std::abs(g[i]), p) * weight[i];
  return std::pow(s * g.grid().cell_measure(), 1.0 / p);
}

WeightedNormReport weighted_norm_ratio(const OperatorSpec& T, const WeightTuple& W, const std::vector<InputTuple>& bank,
                                       CubeFamilyMode mode) {
  T.validate();
  W.validate();
  require(static_cast<int>(W.w.size()) == T.kernel.m, "weighted_norm_ratio: need one weight per input slot");
  require(W.w[0].grid() == T.grid, "weighted_norm_ratio: weights are on a different grid");
  WeightedNormReport rep;
  rep.characteristic = vec_ap_characteristic(W, mode);
  rep.exponent = characteristic_exponent(W);
  rep.bound = std::pow(rep.characteristic, rep.exponent);
  const GridFunction v = W.v();
  const double pt = W.p_total();
  for (std::size_t k = 0; k < bank.size(); ++k) {
    const InputTuple& f = bank[k];
    double den = 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) den *= weighted_lp_norm(f[i], W.w[i], W.p[i]);
    require(den > 0.0, "weighted_norm_ratio: input " + std::to_string(k) + " has zero weighted norm");
    const double ratio = weighted_lp_norm(sdom::apply(T, f), v, pt) / den;
    rep.ratios.push_back(ratio);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax = k;
    }
  }
  return rep;
}

}  // namespace sdom
