#include <doctest.h>

#include <cmath>

#include "sdom/discrete_operator.hpp"

using namespace sdom;

namespace {

GridFunction random_fn(const GridSpec& g, std::uint64_t seed, double zero_frac = 0.0) {
  const CounterRng rng(seed);
  GridFunction f(g, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (rng.uniform(2 * i + 1) >= zero_frac) f[i] = rng.uniform(2 * i) * 2.0 - 1.0;
  return f;
}

// Direct quadruple loop over (x, y1, y2) cells.
GridFunction bilinear_oracle(const KernelSpec& k, const GridFunction& f1, const GridFunction& f2) {
  const GridSpec& g = f1.grid();
  GridFunction out(g, 0.0);
  const double h2 = g.cell_measure() * g.cell_measure();
  for (std::size_t x = 0; x < g.cell_count(); ++x) {
    double s = 0.0;
    for (std::size_t a = 0; a < g.cell_count(); ++a)
      for (std::size_t b = 0; b < g.cell_count(); ++b) {
        if (a == x || b == x) continue;
        const Point ys[2] = {g.center(a), g.center(b)};
        s += eval_kernel(k, g.center(x), ys).value * f1[a] * f2[b];
      }
    out[x] = s * h2;
  }
  return out;
}

}  // namespace

TEST_CASE("apply matches the direct bilinear sum") {
  const GridSpec g = GridSpec::make(1, 5);
  const KernelSpec k = KernelSpec::bilinear_odd_homogeneous();
  const GridFunction f1 = random_fn(g, 1), f2 = random_fn(g, 2, 0.3);
  const std::vector<GridFunction> f{f1, f2};
  const GridFunction got = sdom::apply(OperatorSpec{k, g}, f);
  const GridFunction want = bilinear_oracle(k, f1, f2);
  for (std::size_t i = 0; i < g.cell_count(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("apply vanishes for zero inputs and the zero kernel") {
  const GridSpec g = GridSpec::make(1, 5);
  const std::vector<GridFunction> f{random_fn(g, 3), GridFunction(g, 0.0)};
  CHECK(sdom::apply(OperatorSpec{KernelSpec::bilinear_odd_homogeneous(), g}, f).is_zero());
  const std::vector<GridFunction> h{random_fn(g, 3), random_fn(g, 4)};
  CHECK(sdom::apply(OperatorSpec{KernelSpec::zero(2), g}, h).is_zero());
}

TEST_CASE("MPT convolution of a normalized spike reproduces the kernel") {
  const GridSpec g = GridSpec::make(1, 9, {0, 0}, 8.0);
  const KernelSpec k = KernelSpec::mpt_example(1.0, 2.0);
  const std::size_t a = 20;
  GridFunction f(g, 0.0);
  f[a] = 1.0 / g.cell_size();
  const std::vector<GridFunction> fs{f};
  const GridFunction out = sdom::apply(OperatorSpec{k, g}, fs);
  const Point ya = g.center(a);
  for (std::size_t x = 0; x < g.cell_count(); ++x) {
    const KernelValue kv = eval_kernel(k, g.center(x), std::span<const Point>(&ya, 1));
    CHECK(out[x] == doctest::Approx(kv.singular ? 0.0 : kv.value).epsilon(1e-12));
  }
}

TEST_CASE("non-finite kernel values are reported with cell coordinates") {
  const GridSpec g = GridSpec::make(1, 3);
  const KernelSpec bad = KernelSpec::custom(1, 1, [](const Point& x, std::span<const Point> y) {
    return x[0] > 0.5 && y[0][0] < 0.2 ? NAN : 1.0;
  });
  const std::vector<GridFunction> f{GridFunction(g, 1.0)};
  try {
    (void)sdom::apply(OperatorSpec{bad, g}, f);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
    CHECK(std::string(e.what()).find("cell") != std::string::npos);
  }
}

TEST_CASE("apply is linear in each slot") {
  const GridSpec g = GridSpec::make(1, 5);
  const OperatorSpec T{KernelSpec::bilinear_odd_homogeneous(), g};
  const GridFunction a = random_fn(g, 5), b = random_fn(g, 6), c = random_fn(g, 7);
  GridFunction comb(g, 0.0);
  for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = 2.0 * a[i] - 0.5 * b[i];
  const std::vector<GridFunction> fc{comb, c}, fa{a, c}, fb{b, c};
  const GridFunction lhs = sdom::apply(T, fc);
  const GridFunction ta = sdom::apply(T, fa), tb = sdom::apply(T, fb);
  double scale = 0.0;
  for (double v : lhs.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < comb.size(); ++i) CHECK(std::abs(lhs[i] - (2.0 * ta[i] - 0.5 * tb[i])) <= 1e-12 * scale);
}

TEST_CASE("truncated application") {
  const GridSpec g = GridSpec::make(1, 6);
  const OperatorSpec T{KernelSpec::bilinear_odd_homogeneous(), g};
  const GridFunction f1 = random_fn(g, 8).restricted(CellBox{{28, 0}, {34, 1}});
  const GridFunction f2 = random_fn(g, 9).restricted(CellBox{{30, 0}, {36, 1}});
  const std::vector<GridFunction> f{f1, f2};
  // whole domain: identical to apply
  CHECK(apply_truncated(T, f, full_box(g)) == sdom::apply(T, f));
  // Q = [24, 40) has 3Q = [8, 56) which contains the support; nested Q' gives the same output
  const GridFunction a = apply_truncated(T, f, CellBox{{24, 0}, {40, 1}});
  const GridFunction b = apply_truncated(T, f, CellBox{{16, 0}, {48, 1}});
  CHECK(a == b);
  CHECK(a == sdom::apply(T, f));
  // support outside 3Q
  CHECK(apply_truncated(T, f, CellBox{{0, 0}, {4, 1}}).is_zero());
}

TEST_CASE("weak ratio of an indicator under the identity is 1") {
  const GridSpec g = GridSpec::make(1, 6);
  GridFunction ind(g, 0.0);
  for (int i = 10; i < 27; ++i) ind[i] = 1.0;
  const std::vector<GridFunction> f{ind};
  for (double q : {1.0, 2.0, 3.0}) CHECK(weak_ratio(ind, f, q) == doctest::Approx(1.0).epsilon(1e-14));
  // Chebyshev: sup_lambda lambda |{|f| > lambda}|^(1/q) <= ||f||_q, checked against enumeration of levels
  const GridFunction r = random_fn(g, 10);
  const std::vector<GridFunction> fr{r};
  for (double q : {1.0, 2.0}) {
    double best = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double lam = std::abs(r[i]);
      std::size_t cnt = 0;
      for (std::size_t j = 0; j < r.size(); ++j) cnt += std::abs(r[j]) >= lam ? 1 : 0;
      best = std::max(best, lam * std::pow(cnt * g.cell_measure(), 1.0 / q));
    }
    const double got = weak_ratio(r, fr, q);
    CHECK(got == doctest::Approx(best / lp_norm(r, q)).epsilon(1e-13));
    CHECK(got <= 1.0 + 1e-14);
  }
}

TEST_CASE("weak norm reports") {
  const GridSpec g = GridSpec::make(1, 5);
  const OperatorSpec zero{KernelSpec::zero(2), g};
  const std::vector<InputTuple> bank{{random_fn(g, 11), random_fn(g, 12)}, {random_fn(g, 13), random_fn(g, 14)}};
  const WeakNormReport z = weak_norm(zero, 1.0, bank);
  CHECK(z.max_ratio == 0.0);
  const OperatorSpec T{KernelSpec::bilinear_odd_homogeneous(), g};
  const WeakNormReport one = weak_norm(T, 1.0, {bank[0]});
  const WeakNormReport two = weak_norm(T, 1.0, {bank[0], bank[0]});
  CHECK(one.max_ratio == two.max_ratio);
  CHECK(one.max_ratio > 0.0);
  // invariance under scaling of the inputs
  InputTuple scaled = bank[0];
  for (double& v : scaled[0].values()) v *= 3.7;
  for (double& v : scaled[1].values()) v *= 1e-3;
  CHECK(weak_norm(T, 1.0, {scaled}).max_ratio == doctest::Approx(one.max_ratio).epsilon(1e-12));
  CHECK_THROWS(weak_norm(T, 1.0, {{GridFunction(g, 0.0), random_fn(g, 1)}}));
}

TEST_CASE("bank generation is deterministic and respects supports") {
  const GridSpec g = GridSpec::make(2, 5);
  const auto entries = curated_bank(RelBox{{0.25, 0.25}, {0.5, 0.5}}, 3, 77);
  const auto a = generate_bank(entries, g, 2);
  const auto b = generate_bank(entries, g, 2);
  CHECK(a.size() == 12);
  CHECK(a == b);
  const CellBox box = rel_to_cells(g, RelBox{{0.25, 0.25}, {0.5, 0.5}});
  for (const auto& t : a)
    for (const auto& f : t) CHECK(box.contains(f.support_box()));
  CHECK(CounterRng(5).bits(3) == CounterRng(5).bits(3));
  CHECK(CounterRng(5).split(1).bits(0) != CounterRng(5).split(2).bits(0));
}
