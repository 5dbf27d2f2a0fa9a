#include "sdom/kernel_models.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace sdom {

// ---------------------------------------------------------------- moduli

DiniModulus DiniModulus::power(double c, double eps) {
  DiniModulus w;
  w.kind = Kind::Power;
  w.c = c;
  w.eps = eps;
  return w;
}

DiniModulus DiniModulus::log_power(double c, double eps) {
  DiniModulus w;
  w.kind = Kind::LogPower;
  w.c = c;
  w.eps = eps;
  return w;
}

DiniModulus DiniModulus::from(std::function<double(double)> fn) {
  DiniModulus w;
  w.kind = Kind::Custom;
  w.custom = std::move(fn);
  return w;
}

double DiniModulus::operator()(double t) const {
  switch (kind) {
    case Kind::Power:
      return t <= 0.0 ? 0.0 : c * std::pow(t, eps);
    case Kind::LogPower:
      return t <= 0.0 ? 0.0 : c * std::pow(std::log(std::numbers::e / t), -(1.0 + eps));
    case Kind::Custom:
      return custom(t);
  }
  return 0.0;
}

double DiniModulus::at_log(double u) const {
  switch (kind) {
    case Kind::Power:
      return c * std::exp(-eps * u);
    case Kind::LogPower:
      return c * std::pow(1.0 + u, -(1.0 + eps));
    case Kind::Custom:
      return custom(std::exp(-u));
  }
  return 0.0;
}

void DiniModulus::validate() const {
  if (kind == Kind::Custom) {
    require(static_cast<bool>(custom), "modulus: custom function missing");
  } else {
    require(std::isfinite(c) && c > 0.0, "modulus: c must be positive");
    require(std::isfinite(eps) && eps > 0.0, "modulus: eps must be positive");
  }
  // nonnegative and nondecreasing on a dyadic sample of (0, 1], vanishing at 0
  double prev = (*this)(0.0);
  require(prev == 0.0, "modulus: omega(0) must be 0");
  for (int k = 200; k >= 0; --k) {
    const double v = (*this)(std::ldexp(1.0, -k));
    require(std::isfinite(v) && v >= 0.0, "modulus: omega must be finite and nonnegative");
    require(v >= prev, "modulus: omega must be nondecreasing");
    prev = v;
  }
}

// ---------------------------------------------------------------- kernels

KernelSpec KernelSpec::zero(int m, int n) {
  KernelSpec k;
  k.variant = KernelVariant::Zero;
  k.m = m;
  k.n = n;
  return k;
}

KernelSpec KernelSpec::bilinear_odd_homogeneous() {
  KernelSpec k;
  k.variant = KernelVariant::BilinearOddHomogeneous;
  k.m = 2;
  k.n = 1;
  return k;
}

KernelSpec KernelSpec::mpt_example(double beta, double r) {
  KernelSpec k;
  k.variant = KernelVariant::MPTExample;
  k.m = 1;
  k.n = 1;
  k.beta = beta;
  k.r = r;
  k.convolution = true;
  k.support = OffsetSupport{{-5.0, 0.0}, {-3.0, 0.0}};
  return k;
}

KernelSpec KernelSpec::mpt_truncated(double beta, double r, int ell) {
  KernelSpec k = mpt_example(beta, r);
  k.variant = KernelVariant::MPTTruncated;
  k.ell = ell;
  return k;
}

KernelSpec KernelSpec::dini_synthetic(DiniModulus modulus, double amplitude, int m, int n, Point anchor) {
  KernelSpec k;
  k.variant = KernelVariant::DiniSynthetic;
  k.modulus = std::move(modulus);
  k.amplitude = amplitude;
  k.m = m;
  k.n = n;
  k.anchor = anchor;
  return k;
}

KernelSpec KernelSpec::custom(int m, int n, KernelEvaluator fn, std::string name) {
  KernelSpec k;
  k.variant = KernelVariant::Custom;
  k.m = m;
  k.n = n;
  k.evaluator = std::move(fn);
  k.name = std::move(name);
  return k;
}

void KernelSpec::validate() const {
  require(m == 1 || m == 2, "kernel.m must be 1 or 2");
  require(n == 1 || n == 2, "kernel.n must be 1 or 2");
  switch (variant) {
    case KernelVariant::Zero:
      break;
    case KernelVariant::BilinearOddHomogeneous:
      require(m == 2 && n == 1, "bilinear_odd kernel is defined for m = 2, n = 1");
      break;
    case KernelVariant::MPTTruncated:
      require(ell >= 0 && ell <= 24, "kernel.ell must lie in [0, 24]");
      [[fallthrough]];
    case KernelVariant::MPTExample:
      require(m == 1 && n == 1, "mpt kernels are linear and one-dimensional");
      require(std::isfinite(beta) && beta > 0.0, "kernel.beta must be positive");
      require(std::isfinite(r) && r >= 1.0, "kernel.r must be >= 1");
      break;
    case KernelVariant::DiniSynthetic:
      modulus.validate();
      require(std::isfinite(amplitude), "kernel.amplitude must be finite");
      break;
    case KernelVariant::Custom:
      require(static_cast<bool>(evaluator), "custom kernel needs an evaluator");
      break;
  }
}

std::string KernelSpec::variant_name() const {
  switch (variant) {
    case KernelVariant::Zero: return "zero";
    case KernelVariant::BilinearOddHomogeneous: return "bilinear_odd";
    case KernelVariant::MPTExample: return "mpt";
    case KernelVariant::MPTTruncated: return "mpt_truncated";
    case KernelVariant::DiniSynthetic: return "dini";
    case KernelVariant::Custom: return name.empty() ? "custom" : name;
  }
  return "unknown";
}

double euclidean_distance(const Point& a, const Point& b, int n) {
  const double d0 = a[0] - b[0];
  if (n == 1) return std::abs(d0);
  const double d1 = a[1] - b[1];
  return std::sqrt(d0 * d0 + d1 * d1);
}

namespace {

bool on_diagonal(const Point& x, std::span<const Point> ys, int n) {
  for (const Point& y : ys)
    if (y[0] == x[0] && (n == 1 || y[1] == x[1])) return true;
  return false;
}

bool in_truncation(double t, int ell) {
  const double u = (t - 3.0) * std::ldexp(1.0, ell);
  const double k = std::floor(u);
  const double frac = u - k;
  const double pieces = std::ldexp(1.0, ell + 1);
  return k >= 0.0 && k < pieces && frac > 0.0 && 3.0 * frac <= 1.0;
}

KernelValue eval_mpt(const KernelSpec& k, double t) {
  if (!(t > 3.0 && t < 5.0)) return {0.0, false};
  if (k.variant == KernelVariant::MPTTruncated && !in_truncation(t, k.ell)) return {0.0, false};
  const double u = std::abs(t - 4.0);
  if (u == 0.0) return {0.0, true};
  const double inv_rp = 1.0 - 1.0 / k.r;
  if (inv_rp == 0.0) return {1.0, false};
  const double v = std::pow(u, -inv_rp) * std::pow(std::log(std::numbers::e / u), -(1.0 + k.beta) * inv_rp);
  return {v, false};
}

}  // namespace

KernelValue eval_kernel(const KernelSpec& k, const Point& x, std::span<const Point> ys) {
  require(static_cast<int>(ys.size()) == k.m, "eval_kernel: wrong number of y points");
  switch (k.variant) {
    case KernelVariant::Zero:
      return {0.0, false};
    case KernelVariant::BilinearOddHomogeneous: {
      const double a = x[0] - ys[0][0];
      const double b = x[0] - ys[1][0];
      if (a == 0.0 || b == 0.0) return {0.0, true};
      const double q = a * a + b * b;
      return {(a + b) / (q * std::sqrt(q)), false};
    }
    case KernelVariant::MPTExample:
    case KernelVariant::MPTTruncated:
      return eval_mpt(k, x[0] - ys[0][0]);
    case KernelVariant::DiniSynthetic: {
      if (on_diagonal(x, ys, k.n)) return {0.0, true};
      double s = 0.0;
      for (const Point& y : ys) s += euclidean_distance(x, y, k.n);
      const double rho = euclidean_distance(x, k.anchor, k.n);
      const double w = k.modulus(std::min(1.0, rho / s));
      return {k.amplitude * std::pow(s, -static_cast<double>(k.m * k.n)) * w, false};
    }
    case KernelVariant::Custom: {
      const double v = k.evaluator(x, ys);
      if (!std::isfinite(v) && on_diagonal(x, ys, k.n)) return {0.0, true};
      return {v, false};
    }
  }
  return {0.0, false};
}

// ---------------------------------------------------------------- sample plans

SamplePlan SamplePlan::dyadic(const GridSpec& g, int level_min, int level_max, int subdepth) {
  require(level_min >= 0 && level_min <= level_max, "sampling: need 0 <= level_min <= level_max");
  require(subdepth >= 1, "sampling: subdepth must be >= 1");
  const int per_axis = 1 << subdepth;
  const int points = g.n == 1 ? per_axis : per_axis * per_axis;
  require(points * (points - 1) / 2 <= 16, "sampling: at most 16 (x, z) pairs per cube");
  require(level_max * g.n <= 22, "sampling: level_max too deep for this dimension");

  SamplePlan plan;
  for (int lvl = level_min; lvl <= level_max; ++lvl) {
    const int count = 1 << lvl;
    const double s = g.side / count;
    const int cubes = g.n == 1 ? count : count * count;
    for (int ci = 0; ci < cubes; ++ci) {
      const int i0 = g.n == 1 ? ci : ci / count;
      const int i1 = g.n == 1 ? 0 : ci % count;
      RealCube q;
      q.center = {g.origin[0] + (i0 + 0.5) * s, g.n == 2 ? g.origin[1] + (i1 + 0.5) * s : 0.0};
      q.side = s;
      // sub-cell centers of the concentric half cube
      std::vector<Point> pts;
      const double half = s / 2.0;
      const double step = half / per_axis;
      for (int a = 0; a < per_axis; ++a) {
        const double p0 = q.center[0] - half / 2.0 + (a + 0.5) * step;
        if (g.n == 1) {
          pts.push_back({p0, 0.0});
        } else {
          for (int b = 0; b < per_axis; ++b)
            pts.push_back({p0, q.center[1] - half / 2.0 + (b + 0.5) * step});
        }
      }
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) plan.configs.push_back({q, pts[a], pts[b]});
    }
  }
  return plan;
}

SamplePlan SamplePlan::single(const RealCube& q, const Point& x, const Point& z) {
  SamplePlan p;
  p.configs.push_back({q, x, z});
  return p;
}

// ---------------------------------------------------------------- estimators

namespace {

constexpr int kShellCap = 60;

/// Cell index range [first, last) of centers lying in the real interval [a, b).
std::pair<int, int> center_range(const GridSpec& g, int axis, double a, double b) {
  const int N = g.cells_per_side();
  const double h = g.cell_size();
  const double o = g.origin[axis];
  auto c = [&](int i) { return o + (i + 0.5) * h; };
  auto first_at_least = [&](double v) {
    double guess = std::ceil((v - o) / h - 0.5);
    guess = std::clamp(guess, -1.0, static_cast<double>(N) + 1.0);
    int i = static_cast<int>(guess);
    while (i > 0 && c(i - 1) >= v) --i;
    while (i < N && c(i) < v) ++i;
    return std::clamp(i, 0, N);
  };
  return {first_at_least(a), first_at_least(b)};
}

bool in_real_cube(const Point& p, const Point& center, double side, int n) {
  for (int a = 0; a < n; ++a) {
    const double lo = center[a] - side / 2.0;
    const double hi = center[a] + side / 2.0;
    if (!(p[a] >= lo && p[a] < hi)) return false;
  }
  return true;
}

struct ShellCell {
  Point y;
  int shell;
};

struct ConfigResult {
  // bins indexed [j1 * stride + j2] (m = 2) or [j] (m = 1)
  std::vector<double> pow_sum;
  std::vector<double> max_abs;
  int stride = 0;
  int j_max = 0;
  bool tail = false;
  std::size_t skipped = 0;
};

/// Cells that can carry a nonzero kernel difference for (x, z), with their shell
/// index: 0 inside Q, otherwise the least j with y in 2^j Q.
std::vector<ShellCell> relevant_cells(const KernelSpec& k, const GridSpec& g, const SampleConfig& c,
                                      bool& tail) {
  CellBox region = full_box(g);
  if (k.support) {
    const OffsetSupport& s = *k.support;
    CellBox sb;
    for (int a = 0; a < 2; ++a) {
      if (a >= g.n) {
        sb.lo[a] = 0;
        sb.hi[a] = 1;
        continue;
      }
      const double lo = std::min(c.x[a], c.z[a]) + s.lo[a];
      const double hi = std::max(c.x[a], c.z[a]) + s.hi[a];
      auto [i0, i1] = center_range(g, a, lo, std::nextafter(hi, std::numeric_limits<double>::infinity()));
      sb.lo[a] = i0;
      sb.hi[a] = i1;
    }
    region = region.intersect(sb);
  }
  std::vector<ShellCell> out;
  out.reserve(region.count());
  for_each_cell(g, region, [&](std::size_t idx) {
    const Point y = g.center(idx);
    int j = 0;
    double side = c.cube.side;
    while (!in_real_cube(y, c.cube.center, side, g.n)) {
      ++j;
      side *= 2.0;
      if (j > kShellCap) {
        tail = true;
        return;
      }
    }
    out.push_back({y, j});
  });
  return out;
}

ConfigResult shell_integrals(const KernelSpec& k, const GridSpec& g, const SampleConfig& c, double rp) {
  ConfigResult res;
  const auto cells = relevant_cells(k, g, c, res.tail);
  for (const auto& sc : cells) res.j_max = std::max(res.j_max, sc.shell);
  res.stride = res.j_max + 1;
  const std::size_t bins = k.m == 1 ? res.stride : static_cast<std::size_t>(res.stride) * res.stride;
  res.pow_sum.assign(bins, 0.0);
  res.max_abs.assign(bins, 0.0);
  const bool sup_norm = std::isinf(rp);

  auto accumulate = [&](std::size_t bin, const Point* ys) {
    const std::span<const Point> yspan(ys, static_cast<std::size_t>(k.m));
    const KernelValue kx = eval_kernel(k, c.x, yspan);
    const KernelValue kz = eval_kernel(k, c.z, yspan);
    if (kx.singular || kz.singular || !std::isfinite(kx.value) || !std::isfinite(kz.value)) {
      ++res.skipped;
      return;
    }
    const double d = std::abs(kx.value - kz.value);
    if (d > res.max_abs[bin]) res.max_abs[bin] = d;
    if (!sup_norm) res.pow_sum[bin] += (rp == 2.0 ? d * d : std::pow(d, rp));
  };

  if (k.m == 1) {
    for (const auto& sc : cells) {
      const Point ys[1] = {sc.y};
      accumulate(static_cast<std::size_t>(sc.shell), ys);
    }
  } else {
    for (const auto& a : cells)
      for (const auto& b : cells) {
        const Point ys[2] = {a.y, b.y};
        accumulate(static_cast<std::size_t>(a.shell) * res.stride + b.shell, ys);
      }
  }
  return res;
}

double conjugate(double r) { return r == 1.0 ? std::numeric_limits<double>::infinity() : r / (r - 1.0); }

struct Scored {
  double value = 0.0;
  std::vector<double> terms;
  int k_max = 0;
  bool tail = false;
  std::size_t skipped = 0;
  bool skipped_pair = false;
};

EstimateReport reduce(const std::vector<Scored>& scored) {
  EstimateReport rep;
  rep.samples = scored.size();
  bool have = false;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const Scored& s = scored[i];
    rep.skipped += s.skipped;
    rep.tail_flag = rep.tail_flag || s.tail;
    if (s.skipped_pair) {
      ++rep.skipped_pairs;
      continue;
    }
    if (!have || s.value > rep.value) {
      have = true;
      rep.value = s.value;
      rep.terms = s.terms;
      rep.k_max = s.k_max;
      rep.argmax = i;
    }
  }
  return rep;
}

}  // namespace

EstimateReport hormander_constant(const KernelSpec& k, const GridSpec& g, double r, const SamplePlan& plan) {
  k.validate();
  g.validate();
  require(std::isfinite(r) && r >= 1.0, "hormander_constant: r must be >= 1");
  require(!plan.configs.empty(), "hormander_constant: empty sample plan");
  require(k.n == g.n, "hormander_constant: kernel and grid dimensions differ");

  const double rp = conjugate(r);
  const double cell_vol = std::pow(g.cell_measure(), k.m);
  std::vector<Scored> scored(plan.configs.size());
  parallel_for(plan.configs.size(), [&](std::size_t i) {
    const SampleConfig& c = plan.configs[i];
    const ConfigResult res = shell_integrals(k, g, c, rp);
    Scored s;
    s.tail = res.tail;
    s.skipped = res.skipped;
    s.k_max = res.j_max;
    for (int kk = 1; kk <= res.j_max; ++kk) {
      double sum = 0.0;
      double mx = 0.0;
      if (k.m == 1) {
        sum = res.pow_sum[kk];
        mx = res.max_abs[kk];
      } else {
        // tuples whose largest shell index is exactly kk
        for (int a = 0; a <= kk; ++a)
          for (int b = 0; b <= kk; ++b) {
            if (std::max(a, b) != kk) continue;
            const std::size_t bin = static_cast<std::size_t>(a) * res.stride + b;
            sum += res.pow_sum[bin];
            mx = std::max(mx, res.max_abs[bin]);
          }
      }
      const double big = std::pow(std::ldexp(c.cube.side, kk), g.n);  // |2^k Q|
      double term;
      if (std::isinf(rp)) {
        term = std::pow(big, k.m) * mx;
      } else {
        term = std::pow(big, k.m / r) * std::pow(sum * cell_vol, 1.0 / rp);
      }
      s.terms.push_back(term);
      s.value += term;
    }
    scored[i] = std::move(s);
  });
  return reduce(scored);
}

EstimateReport h2_constant(const KernelSpec& k, const GridSpec& g, double r, double delta, const SamplePlan& plan) {
  k.validate();
  g.validate();
  require(std::isfinite(r) && r >= 1.0, "h2_constant: r must be >= 1");
  require(std::isfinite(delta) && delta > g.n / r, "h2_constant: delta must exceed n/r");
  require(!plan.configs.empty(), "h2_constant: empty sample plan");
  require(k.n == g.n, "h2_constant: kernel and grid dimensions differ");

  const double rp = conjugate(r);
  const double cell_vol = std::pow(g.cell_measure(), k.m);
  std::vector<Scored> scored(plan.configs.size());
  parallel_for(plan.configs.size(), [&](std::size_t i) {
    const SampleConfig& c = plan.configs[i];
    Scored s;
    const double dist = euclidean_distance(c.x, c.z, g.n);
    if (dist == 0.0) {
      s.skipped_pair = true;
      scored[i] = std::move(s);
      return;
    }
    const ConfigResult res = shell_integrals(k, g, c, rp);
    s.tail = res.tail;
    s.skipped = res.skipped;
    s.k_max = res.j_max;
    const double q_meas = std::pow(c.cube.side, g.n);
    const double scale = std::pow(q_meas, k.m * delta / g.n) / std::pow(dist, k.m * (delta - g.n / r));
    s.terms.assign(static_cast<std::size_t>(res.j_max), 0.0);
    auto consider = [&](int j0, std::size_t bin) {
      const double integral = std::isinf(rp) ? res.max_abs[bin] : std::pow(res.pow_sum[bin] * cell_vol, 1.0 / rp);
      const double v = integral * scale * std::pow(2.0, k.m * delta * j0);
      if (j0 >= 1) s.terms[j0 - 1] = std::max(s.terms[j0 - 1], v);
      s.value = std::max(s.value, v);
    };
    if (k.m == 1) {
      for (int j = 1; j <= res.j_max; ++j) consider(j, static_cast<std::size_t>(j));
    } else {
      for (int a = 0; a <= res.j_max; ++a)
        for (int b = 0; b <= res.j_max; ++b) {
          if (a == 0 && b == 0) continue;
          consider(std::max(a, b), static_cast<std::size_t>(a) * res.stride + b);
        }
    }
    scored[i] = std::move(s);
  });
  return reduce(scored);
}

double dini_norm(const DiniModulus& omega) {
  omega.validate();
  using boost::math::quadrature::gauss;
  constexpr int kGeometricPanels = 1 << 12;
  constexpr int kSlowStart = 64;
  const double ln2 = std::numbers::ln2;
  const auto g = [&](double u) { return omega.at_log(u); };
  double sum = 0.0;
  double prev = 0.0;
  for (int k = 0; k < kGeometricPanels; ++k) {
    // t = e^{-u}: integral of omega(t) dt/t over [2^{-k-1}, 2^{-k}]
    const double a = k * ln2;
    const double panel = gauss<double, 15>::integrate(g, a, a + ln2);
    sum += panel;
    if (!std::isfinite(sum)) break;
    if (panel == 0.0) return sum;  // omega is nondecreasing, so it vanishes from here on
    // power-type moduli decay geometrically: the remaining panels sum to about panel * rho / (1 - rho)
    const double rho = prev > 0.0 ? panel / prev : 1.0;
    if (rho < 0.95 && panel * rho / (1.0 - rho) < 1e-12 * sum) return sum;
    prev = panel;
    if (k + 1 == kSlowStart && !(rho < 0.95)) {
      // slow (log-type) decay: integrate the rest on [a, inf) with a double-exponential rule
      double err = 0.0;
      double tail = std::numeric_limits<double>::infinity();
      try {
        boost::math::quadrature::exp_sinh<double> rule;
        tail = rule.integrate(g, (k + 1) * ln2, std::numeric_limits<double>::infinity(), 1e-10, &err);
      } catch (const std::exception&) {
        break;
      }
      if (!std::isfinite(tail) || err > 1e-6 * (sum + tail)) break;
      return sum + tail;
    }
  }
  fail(ErrorCode::NotDini, "modulus is not Dini: the integral of omega(t)/t does not converge");
}

std::vector<double> omega_profile(const KernelSpec& k, const GridSpec& g, const Point& x, const Point& z,
                                  std::span<const double> t_grid) {
  k.validate();
  require(k.n == g.n, "omega_profile: kernel and grid dimensions differ");
  const double dist = euclidean_distance(x, z, g.n);
  require(dist > 0.0, "omega_profile: x and z must differ");
  for (double t : t_grid) require(t > 0.0 && t <= 1.0, "omega_profile: t must lie in (0, 1]");

  const std::size_t cells = g.cell_count();
  const double power = static_cast<double>(k.m * g.n);
  // per first-slot cell, partial maxima; merged in index order afterwards
  std::vector<std::vector<double>> partial(cells, std::vector<double>(t_grid.size(), 0.0));
  parallel_for(cells, [&](std::size_t i) {
    auto& out = partial[i];
    const Point y1 = g.center(i);
    auto visit = [&](const Point* ys) {
      double s = 0.0;
      for (int a = 0; a < k.m; ++a) s += euclidean_distance(x, ys[a], g.n);
      if (s == 0.0) return;
      const double ratio = dist / s;
      const std::span<const Point> yspan(ys, static_cast<std::size_t>(k.m));
      bool evaluated = false;
      double val = 0.0;
      for (std::size_t t = 0; t < t_grid.size(); ++t) {
        if (!(ratio >= t_grid[t] / 2.0 && ratio <= t_grid[t])) continue;
        if (!evaluated) {
          evaluated = true;
          const KernelValue kx = eval_kernel(k, x, yspan);
          const KernelValue kz = eval_kernel(k, z, yspan);
          if (kx.singular || kz.singular || !std::isfinite(kx.value) || !std::isfinite(kz.value)) return;
          val = std::abs(kx.value - kz.value) * std::pow(s, power);
        }
        out[t] = std::max(out[t], val);
      }
    };
    if (k.m == 1) {
      const Point ys[1] = {y1};
      visit(ys);
    } else {
      for (std::size_t j = 0; j < cells; ++j) {
        const Point ys[2] = {y1, g.center(j)};
        visit(ys);
      }
    }
  });
  std::vector<double> result(t_grid.size(), 0.0);
  for (const auto& p : partial)
    for (std::size_t t = 0; t < result.size(); ++t) result[t] = std::max(result[t], p[t]);
  return result;
}

}  // namespace sdom
