#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "greedygraph/branching.hpp"

using namespace greedygraph;

namespace {

RoundContext surrogate(std::uint64_t i) { return RoundContext::make(1000000, 0.1).at_round(i); }

}  // namespace

TEST(ClosedForm, EndpointsAndIdentity) {
  for (std::uint64_t i : {0U, 4U, 9U}) {
    const RoundContext ctx = surrogate(i);
    const ClosedFormValue zero = closed_form(ctx, 0.0);
    EXPECT_EQ(zero.P, 0.0);
    EXPECT_EQ(zero.p, 1.0);
    const ClosedFormValue end = closed_form(ctx, ctx.delta());
    const double next = phi_big((i + 1) * ctx.delta());
    EXPECT_NEAR(end.P, (next - ctx.Phi_at(i)) / ctx.phi_at(i), 1e-14);
    EXPECT_NEAR(end.p, phi_small((i + 1) * ctx.delta()) / ctx.phi_at(i), 1e-14);
    EXPECT_GE(end.P * ctx.phi_at(i), 0.0);
    for (double x : survival_grid(ctx, 300)) {
      const ClosedFormValue c = closed_form(ctx, x);
      const double a = 2 * ctx.Phi_at(i) * ctx.phi_at(i);
      const double b = ctx.phi_at(i) * ctx.phi_at(i);
      EXPECT_NEAR(std::exp(-c.P * c.P * b - a * c.P), c.p, 1e-10);
      EXPECT_LE(c.P, x + 1e-15);  // 0 <= P(x) <= x
    }
    EXPECT_THROW(closed_form(ctx, 2 * ctx.delta()), std::invalid_argument);
  }
}

TEST(ClosedForm, TelescopesAcrossRounds) {
  const RoundContext base = RoundContext::make(1000000, 0.1);
  double product = 1.0;
  for (std::uint64_t i = 0; i < base.total_rounds(); ++i) product *= closed_form(base.at_round(i), base.delta()).p;
  EXPECT_NEAR(product, base.phi_at(base.total_rounds()), 1e-8);
}

TEST(LimitRecursion, LevelStructure) {
  const RoundContext ctx = surrogate(4);
  const auto levels = limit_recursion(ctx, 5, 256);
  ASSERT_EQ(levels.size(), 6U);
  for (double p : levels[0].p) EXPECT_EQ(p, 1.0);
  for (const auto& c : levels) {
    EXPECT_EQ(c.p.front(), 1.0);
    EXPECT_EQ(c.P.front(), 0.0);
    for (std::size_t j = 1; j < c.p.size(); ++j) {
      EXPECT_LE(c.p[j], c.p[j - 1]);  // nonincreasing in x
      EXPECT_GT(c.P[j], c.P[j - 1]);
      EXPECT_LE(c.P[j], c.x[j] + 1e-15);
    }
  }
  EXPECT_THROW(limit_recursion(ctx, 5, 255), std::invalid_argument);
}

TEST(LimitRecursion, ConvergesToClosedForm) {
  for (std::uint64_t i : {0U, 4U, 9U}) {
    const RoundContext ctx = surrogate(i);
    const auto levels = limit_recursion(ctx, 40);
    double gap = 0.0;
    for (std::size_t j = 0; j < levels[40].x.size(); ++j) {
      gap = std::max(gap, std::fabs(levels[40].p[j] - closed_form(ctx, levels[40].x[j]).p));
    }
    EXPECT_LE(gap, 1e-8) << "i=" << i;
  }
}

TEST(LimitRecursion, FixedPointResidual) {
  // Residual of the discrete recursion evaluated at the closed form, with P by quadrature.
  const RoundContext ctx = surrogate(4);
  const auto grid = survival_grid(ctx, 4096);
  std::vector<double> p;
  for (double x : grid) p.push_back(closed_form(ctx, x).p);
  const auto P = cumulative_trapezoid(grid, p);
  const double a = 2 * ctx.Phi_at(4) * ctx.phi_at(4);
  const double b = ctx.phi_at(4) * ctx.phi_at(4);
  for (std::size_t j = 0; j < grid.size(); ++j) EXPECT_NEAR(std::exp(-a * P[j] - b * P[j] * P[j]), p[j], 1e-9);
}

TEST(LimitRecursion, OddEvenSandwich) {
  const RoundContext ctx = surrogate(9);
  const auto levels = limit_recursion(ctx, 41);
  for (std::size_t j = 0; j < levels[0].x.size(); j += 7) {
    const double p = closed_form(ctx, levels[0].x[j]).p;
    for (int l = 0; l + 2 <= 41; ++l) {
      // p_{l+2} lies between p_l and p, up to the grid's resolution.
      const double lo = std::min(levels[l].p[j], p) - 1e-9;
      const double hi = std::max(levels[l].p[j], p) + 1e-9;
      EXPECT_GE(levels[l + 2].p[j], lo);
      EXPECT_LE(levels[l + 2].p[j], hi);
    }
    // Far from convergence the bracketing is strict.
    EXPECT_LT(levels[1].p[j], p + 1e-15);
    EXPECT_GE(levels[2].p[j], levels[3].p[j]);
  }
}

TEST(LimitRecursion, GridDoublingGate) {
  // Trapezoid error is O(h^2): at i = 0 the default grid misses 1e-9 and one
  // doubling is needed; later rounds pass on the default grid.
  for (std::uint64_t i : {0U, 4U, 9U}) {
    const RoundContext ctx = surrogate(i);
    const GatedRecursion g = gated_limit_recursion(ctx, 40);
    EXPECT_TRUE(g.converged) << "i=" << i;
    EXPECT_LT(g.doubling_change, 1e-9);
    EXPECT_LE(g.grid_points, 4096U);
    const double finer = limit_recursion(ctx, 40, 2 * g.grid_points).back().p.back();
    EXPECT_NEAR(g.levels.back().p.back(), finer, 1e-9);
  }
  const GatedRecursion capped = gated_limit_recursion(surrogate(0), 40, 256, 1e-15, 512);
  EXPECT_FALSE(capped.converged);
  EXPECT_EQ(capped.grid_points, 512U);
}

TEST(SurvivalModel, ZetaSelection) {
  const RoundContext ctx = surrogate(4);
  const SurvivalModel m = SurvivalModel::make(ctx, 8);
  EXPECT_EQ(m.n2, 64U);
  EXPECT_GE(m.zeta, 0.1);
  EXPECT_LE(m.zeta, 0.9);
  const double a = 2.0 * 8 * ctx.Phi_at(4);
  EXPECT_NEAR(m.zeta * a, static_cast<double>(m.n1), 1e-9);
  EXPECT_NEAR(m.m() * ctx.phi_at(4), 8.0, 1e-12);
  const SurvivalModel at_zero = SurvivalModel::make(surrogate(0), 8);
  EXPECT_EQ(at_zero.n1, 0U);
  const SurvivalModel given = SurvivalModel::make(ctx, 8, 40, 1024, 0.5);
  EXPECT_EQ(given.n1, static_cast<std::uint64_t>(std::llround(0.5 * a)));
  EXPECT_THROW(SurvivalModel::make(ctx, 8, 40, 1024, 0.95), std::invalid_argument);
}

TEST(FiniteM, LeaflessModelSurvives) {
  SurvivalModel m = SurvivalModel::make(surrogate(4), 8, 10);
  m.n1 = 0;
  m.n2 = 0;
  for (const auto& c : finite_m_recursion(m))
    for (double p : c.p) EXPECT_EQ(p, 1.0);
}

TEST(FiniteM, ZeroBirthtimeAndMonotonicity) {
  const RoundContext ctx = surrogate(4);
  const SurvivalModel base = SurvivalModel::make(ctx, 8, 6);
  const auto levels = finite_m_recursion(base);
  for (const auto& c : levels) EXPECT_EQ(c.p.front(), 1.0);
  // More child sets of either kind can only lower survival at odd depth 1.
  SurvivalModel more1 = base;
  more1.n1 += 5;
  SurvivalModel more2 = base;
  more2.n2 += 20;
  const double p = finite_m_recursion(base)[1].p.back();
  EXPECT_LT(finite_m_recursion(more1)[1].p.back(), p);
  EXPECT_LT(finite_m_recursion(more2)[1].p.back(), p);
}

TEST(FiniteM, ApproachesLimitAsKGrows) {
  const RoundContext ctx = surrogate(4);
  const double limit = limit_recursion(ctx, 40).back().p.back();
  double prev = 1e9;
  for (std::uint64_t k : {4U, 16U, 64U, 256U}) {
    const double gap = std::fabs(finite_m_recursion(SurvivalModel::make(ctx, k, 40)).back().p.back() - limit);
    EXPECT_LT(gap, prev) << "k=" << k;
    prev = gap;
  }
  EXPECT_LE(prev, 2.0 / 256);
}

TEST(SimulateTree, TrivialCases) {
  const RoundContext ctx = surrogate(4);
  const SurvivalModel m = SurvivalModel::make(ctx, 8, 6);
  const McEstimate zero = simulate_tree(m, 0.0, 2000, 1);
  EXPECT_EQ(zero.mean, 1.0);
  EXPECT_EQ(zero.std_error, 0.0);
  const McEstimate leaf = simulate_tree(SurvivalModel::make(ctx, 8, 0), ctx.delta(), 2000, 1);
  EXPECT_EQ(leaf.mean, 1.0);
  EXPECT_THROW(simulate_tree(m, 0.1, 999, 1), std::invalid_argument);
}

TEST(SimulateTree, AgreesWithRecursion) {
  const RoundContext ctx = surrogate(4);
  for (std::uint64_t k : {4U, 8U}) {
    for (int depth : {1, 2, 5}) {
      const SurvivalModel m = SurvivalModel::make(ctx, k, depth);
      const double rec = finite_m_recursion(m).back().p.back();
      const McEstimate mc = simulate_tree(m, ctx.delta(), 40000, 11 + k + depth);
      EXPECT_NEAR(mc.mean, rec, 4 * mc.std_error + 1e-12) << "k=" << k << " depth=" << depth;
    }
  }
}

TEST(SimulateTree, Deterministic) {
  const SurvivalModel m = SurvivalModel::make(surrogate(4), 8, 6);
  EXPECT_EQ(simulate_tree(m, 0.2, 3000, 5).mean, simulate_tree(m, 0.2, 3000, 5).mean);
}

TEST(Curves, CsvAndInterpolation) {
  const RoundContext ctx = surrogate(2);
  const auto levels = limit_recursion(ctx, 2, 256);
  std::ostringstream out;
  write_curves_csv(out, levels, ctx);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "level,x,p_l,P_l,p_closed");
  const auto& c = levels[2];
  EXPECT_DOUBLE_EQ(interpolate(c.x, c.p, c.x[10]), c.p[10]);
  const double mid = 0.5 * (c.x[10] + c.x[11]);
  EXPECT_NEAR(interpolate(c.x, c.p, mid), 0.5 * (c.p[10] + c.p[11]), 1e-15);
}
