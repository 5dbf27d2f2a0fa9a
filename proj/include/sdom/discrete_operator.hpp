#pragma once

#include <span>
#include <vector>

#include "sdom/dyadic_grid.hpp"
#include "sdom/input_bank.hpp"
#include "sdom/kernel_models.hpp"

namespace sdom {

/// Discretized m-linear operator: midpoint quadrature at cell centers, with
/// every tuple that has some y_i in the output cell contributing 0.
struct OperatorSpec {
  KernelSpec kernel;
  GridSpec grid;

  void validate() const;
  void check_inputs(std::span<const GridFunction> f) const;
};

/// (T f)(x) = sum over cell tuples y of K(x, y) prod_i f_i(y_i) h^{mn}.
[[nodiscard]] GridFunction apply(const OperatorSpec& T, std::span<const GridFunction> f);

/// apply(T, f_i restricted to triple_cube(cube)).
[[nodiscard]] GridFunction apply_truncated(const OperatorSpec& T, std::span<const GridFunction> f,
                                           const CellBox& cube);

/// T applied to the f_i restricted to `input`, evaluated only at the cells of
/// `output` (returned in for_each_cell order).
[[nodiscard]] std::vector<double> apply_region(const OperatorSpec& T, std::span<const GridFunction> f,
                                               const CellBox& input, const CellBox& output);

struct WeakNormReport {
  double q = 1.0;
  std::size_t bank_size = 0;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
  std::vector<double> ratios;
};

/// (sum |f|^p h^n)^(1/p)
[[nodiscard]] double lp_norm(const GridFunction& f, double p);

/// sup_lambda lambda |{|g| > lambda}|^(m/q) / prod_i ||f_i||_q, m = f.size().
/// The supremum is attained in the limit at the value levels of g.
[[nodiscard]] double weak_ratio(const GridFunction& g, std::span<const GridFunction> f, double q);

/// ||g||_p / prod_i ||f_i||_{p_i}, unweighted.
[[nodiscard]] double strong_ratio(const GridFunction& g, std::span<const GridFunction> f, double p,
                                  std::span<const double> p_in);

[[nodiscard]] WeakNormReport weak_norm(const OperatorSpec& T, double q, const std::vector<InputTuple>& bank);

}  // namespace sdom
