#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdom/common.hpp"
#include "sdom/dyadic_grid.hpp"

namespace sdom {

/// Modulus of continuity omega on (0, 1].
struct DiniModulus {
  enum class Kind { Power, LogPower, Custom };

  Kind kind = Kind::Power;
  double c = 1.0;
  double eps = 1.0;
  std::function<double(double)> custom;

  /// c * t^eps
  static DiniModulus power(double c, double eps);
  /// c * (log(e/t))^-(1+eps)
  static DiniModulus log_power(double c, double eps);
  static DiniModulus from(std::function<double(double)> fn);

  [[nodiscard]] double operator()(double t) const;
  /// omega(e^-u), evaluated without underflow for the closed-form kinds.
  [[nodiscard]] double at_log(double u) const;
  void validate() const;
};

enum class KernelVariant { Zero, BilinearOddHomogeneous, MPTExample, MPTTruncated, DiniSynthetic, Custom };

using KernelEvaluator = std::function<double(const Point& x, std::span<const Point> ys)>;

/// Axis-aligned box of offsets y - x outside of which a kernel vanishes.
struct OffsetSupport {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
};

/// An evaluable m-linear kernel K(x, y_1, ..., y_m).
///
/// MPT variants are one-dimensional convolution kernels evaluated at t = x - y,
///   K(t) = |t-4|^(-1/r') (log(e/|t-4|))^(-(1+beta)/r') on 3 < t < 5,
/// with the truncated variant keeping only the pieces
///   (3 + k/2^ell, 3 + (3k+1)/(3 * 2^ell)],  k = 0 .. 2^(ell+1) - 1.
/// DiniSynthetic is amplitude * S^(-mn) * omega(min(1, |x - anchor| / S)) with
/// S = sum_i |x - y_i|; its oscillation in x is governed by omega.
struct KernelSpec {
  KernelVariant variant = KernelVariant::Zero;
  int m = 1;
  int n = 1;
  double beta = 1.0;
  double r = 2.0;
  int ell = 0;
  DiniModulus modulus;
  double amplitude = 1.0;
  Point anchor{0.0, 0.0};
  KernelEvaluator evaluator;
  bool convolution = false;
  std::optional<OffsetSupport> support;
  std::string name;

  static KernelSpec zero(int m, int n = 1);
  static KernelSpec bilinear_odd_homogeneous();
  static KernelSpec mpt_example(double beta, double r);
  static KernelSpec mpt_truncated(double beta, double r, int ell);
  static KernelSpec dini_synthetic(DiniModulus modulus, double amplitude, int m, int n, Point anchor);
  static KernelSpec custom(int m, int n, KernelEvaluator fn, std::string name = "custom");

  void validate() const;
  [[nodiscard]] std::string variant_name() const;
};

/// Kernel value, or the distinguished singular marker.
struct KernelValue {
  double value = 0.0;
  bool singular = false;
};

[[nodiscard]] KernelValue eval_kernel(const KernelSpec& k, const Point& x, std::span<const Point> ys);

/// Real-coordinate cube used as a base cube Q by the estimators.
struct RealCube {
  Point center{0.0, 0.0};
  double side = 1.0;
};

struct SampleConfig {
  RealCube cube;
  Point x{0.0, 0.0};
  Point z{0.0, 0.0};
};

/// Finite, deterministic set of (Q, x, z) configurations.
struct SamplePlan {
  std::vector<SampleConfig> configs;

  /// Every dyadic cube of the domain with level in [level_min, level_max]; for each,
  /// the centers of the 2^(subdepth*n) sub-cells of the concentric half cube, paired
  /// in all unordered ways (at most 16 pairs per cube).
  static SamplePlan dyadic(const GridSpec& g, int level_min, int level_max, int subdepth);
  static SamplePlan single(const RealCube& q, const Point& x, const Point& z);
};

struct EstimateReport {
  double value = 0.0;
  /// terms[k-1] is the k-th summand (Hormander) or the max over j0 = k (H2).
  std::vector<double> terms;
  int k_max = 0;
  bool tail_flag = false;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::size_t skipped_pairs = 0;
  std::size_t argmax = 0;
  bool lower_bound = true;
};

/// Sampled lower estimate of the m-linear L^r-Hormander constant K_r.
[[nodiscard]] EstimateReport hormander_constant(const KernelSpec& k, const GridSpec& g, double r,
                                                const SamplePlan& plan);

/// Sampled lower estimate of the smallest admissible constant in the annular
/// Holder-type condition with decay exponent delta > n/r.
[[nodiscard]] EstimateReport h2_constant(const KernelSpec& k, const GridSpec& g, double r, double delta,
                                         const SamplePlan& plan);

/// Integral of omega(t) dt / t over (0, 1]. Throws ErrorCode::NotDini when the
/// dyadic tail does not become negligible.
[[nodiscard]] double dini_norm(const DiniModulus& omega);

/// omega^{x,z}(t): max over grid tuples y with t/2 <= |x-z| / S <= t of
/// |K(x,y) - K(z,y)| * S^(mn), S = sum_i |x - y_i|. Empty shells give 0.
[[nodiscard]] std::vector<double> omega_profile(const KernelSpec& k, const GridSpec& g, const Point& x,
                                                const Point& z, std::span<const double> t_grid);

[[nodiscard]] double euclidean_distance(const Point& a, const Point& b, int n);

}  // namespace sdom
