#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "greedygraph/numerics.hpp"

namespace greedygraph {

/// Survival probability of a tree root as a function of its birthtime x on a
/// uniform grid over [0, delta] (x in units of n^{-1/2}), with P(x) = int_0^x p.
struct SurvivalCurve {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> P;
};

struct ClosedFormValue {
  double P;  // (Phi(i delta + x) - Phi(i delta)) / phi(i delta)
  double p;  // phi(i delta + x) / phi(i delta)
};

/// Fixed point of the m -> infinity survival recursion at the context's
/// round i. Requires 0 <= x <= delta.
ClosedFormValue closed_form(const RoundContext& ctx, double x);

/// Uniform grid of `points` nodes over [0, delta].
std::vector<double> survival_grid(const RoundContext& ctx, std::size_t points);

/// Cumulative trapezoid rule on a uniform grid; out[0] = 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Limit (m -> infinity) recursion:
///   p_0 = 1,  p_l(x) = exp(-2 Phi phi P_{l-1}(x) - phi^2 P_{l-1}(x)^2),
/// with Phi, phi taken at i delta and P_{l-1} by trapezoid quadrature.
/// Returns levels 0..depth. Requires grid_points >= 256.
std::vector<SurvivalCurve> limit_recursion(const RoundContext& ctx, int depth, std::size_t grid_points = 1024);

struct GatedRecursion {
  std::vector<SurvivalCurve> levels;  // on the accepted grid
  std::size_t grid_points = 0;
  double doubling_change = 0.0;       // |p_depth(delta)| change from one more doubling
  bool converged = false;
};

/// Convergence gate: starting from `grid_points`, doubles the grid until one
/// more doubling moves p_depth(delta) by less than `tolerance`, up to
/// `max_points`. converged is false if the cap is reached first.
GatedRecursion gated_limit_recursion(const RoundContext& ctx, int depth, std::size_t grid_points = 1024,
                                     double tolerance = 1e-9, std::size_t max_points = 65536);

/// Finite tree at round i. m = k / phi(i delta) is never materialized beyond
/// this struct; only k, the child counts and zeta enter the formulas.
struct SurvivalModel {
  RoundContext ctx;       // at round i
  std::uint64_t k = 8;    // m * phi(i delta)
  double zeta = 1.0;      // thinning of singleton child-sets
  std::uint64_t n1 = 0;   // singleton child-sets per node
  std::uint64_t n2 = 0;   // pair child-sets per node, = k^2
  int depth = 40;
  std::size_t grid_points = 1024;

  double m() const { return static_cast<double>(k) / ctx.phi_at(ctx.round()); }

  /// Builds the model. Without an explicit zeta, picks the smallest
  /// zeta in [0.1, 0.9] for which zeta * 2 k Phi(i delta) is an integer; when
  /// that interval holds no integer, falls back to zeta = 0.1 and rounds.
  /// With an explicit zeta, n1 = round(zeta * 2 k Phi(i delta)).
  static SurvivalModel make(const RoundContext& ctx, std::uint64_t k, int depth = 40,
                            std::size_t grid_points = 1024, std::optional<double> zeta = std::nullopt);
};

/// p_l(x) = (1 - P_{l-1}(x) / (zeta m))^{n1} * (1 - (P_{l-1}(x) / m)^2)^{n2},
/// p_0 = 1, levels 0..model.depth on the model's grid.
std::vector<SurvivalCurve> finite_m_recursion(const SurvivalModel& model);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Monte Carlo over random trees of depth model.depth with root birthtime x.
/// Only triggered child-sets are materialized. Requires trials >= 1000.
McEstimate simulate_tree(const SurvivalModel& model, double x, std::uint64_t trials, std::uint64_t seed);

/// Linear interpolation of a curve at x within its grid.
double interpolate(const std::vector<double>& grid, const std::vector<double>& values, double x);

/// Columns: level, x, p_l, P_l, p_closed.
void write_curves_csv(std::ostream& out, const std::vector<SurvivalCurve>& levels, const RoundContext& ctx);

}  // namespace greedygraph
