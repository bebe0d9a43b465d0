#include "greedygraph/branching.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "greedygraph/rng.hpp"

namespace greedygraph {
namespace {

constexpr std::size_t kMinGrid = 256;

void check_grid(std::size_t points) {
  if (points < kMinGrid) throw std::invalid_argument("survival grid needs at least 256 points");
}

void check_depth(int depth) {
  if (depth < 0) throw std::invalid_argument("tree depth must be >= 0");
}

SurvivalCurve level_zero(const std::vector<double>& grid) {
  SurvivalCurve c;
  c.x = grid;
  c.p.assign(grid.size(), 1.0);
  c.P = grid;
  return c;
}

// Phi(i delta + x), reading the memo table at grid ends.
double Phi_shifted(const RoundContext& ctx, double x) {
  const std::uint64_t i = ctx.round();
  if (x == 0.0) return ctx.Phi_at(i);
  if (x == ctx.delta() && i < ctx.total_rounds()) return ctx.Phi_at(i + 1);
  return phi_big(static_cast<double>(i) * ctx.delta() + x);
}

struct TreeSampler {
  const SurvivalModel& model;
  StreamRng& rng;
  double m;

  // Survival of a node with birthtime y and `levels` levels below it.
  bool survives(double y, int levels) {
    if (levels == 0) return true;
    const double t = std::min(y, model.ctx.delta());
    if (t <= 0.0) return true;
    const std::uint64_t singles = binomial_small_mean(rng, model.n1, t / (model.zeta * m));
    for (std::uint64_t s = 0; s < singles; ++s) {
      if (survives(t * rng.uniform(), levels - 1)) return false;
    }
    const double q = t / m;
    const std::uint64_t pairs = binomial_small_mean(rng, model.n2, q * q);
    for (std::uint64_t s = 0; s < pairs; ++s) {
      const double a = t * rng.uniform();
      const double b = t * rng.uniform();
      if (survives(a, levels - 1) && survives(b, levels - 1)) return false;
    }
    return true;
  }
};

}  // namespace

ClosedFormValue closed_form(const RoundContext& ctx, double x) {
  if (!(x >= 0.0 && x <= ctx.delta())) throw std::invalid_argument("closed_form: x must lie in [0, delta]");
  const std::uint64_t i = ctx.round();
  const double Phi0 = ctx.Phi_at(i);
  const double phi0 = ctx.phi_at(i);
  const double Phi1 = Phi_shifted(ctx, x);
  // phi(a)/phi(b) as one exponential keeps the ratio accurate when both are tiny.
  return {(Phi1 - Phi0) / phi0, std::exp((Phi0 - Phi1) * (Phi0 + Phi1))};
}

std::vector<double> survival_grid(const RoundContext& ctx, std::size_t points) {
  if (points < 2) throw std::invalid_argument("survival grid needs at least 2 points");
  std::vector<double> x(points);
  const double delta = ctx.delta();
  const double last = static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) x[j] = delta * static_cast<double>(j) / last;
  x.back() = delta;
  return x;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("cumulative_trapezoid: size mismatch");
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t j = 1; j < x.size(); ++j) out[j] = out[j - 1] + 0.5 * (x[j] - x[j - 1]) * (y[j] + y[j - 1]);
  return out;
}

std::vector<SurvivalCurve> limit_recursion(const RoundContext& ctx, int depth, std::size_t grid_points) {
  check_grid(grid_points);
  check_depth(depth);
  const std::uint64_t i = ctx.round();
  const double a = 2.0 * ctx.Phi_at(i) * ctx.phi_at(i);
  const double b = ctx.phi_at(i) * ctx.phi_at(i);

  std::vector<SurvivalCurve> levels;
  levels.reserve(static_cast<std::size_t>(depth) + 1);
  levels.push_back(level_zero(survival_grid(ctx, grid_points)));
  for (int l = 1; l <= depth; ++l) {
    const SurvivalCurve& prev = levels.back();
    SurvivalCurve next;
    next.x = prev.x;
    next.p.resize(prev.x.size());
    for (std::size_t j = 0; j < prev.x.size(); ++j) {
      const double P = prev.P[j];
      next.p[j] = std::exp(-a * P - b * P * P);
    }
    next.P = cumulative_trapezoid(next.x, next.p);
    levels.push_back(std::move(next));
  }
  return levels;
}

GatedRecursion gated_limit_recursion(const RoundContext& ctx, int depth, std::size_t grid_points, double tolerance,
                                     std::size_t max_points) {
  GatedRecursion out;
  out.grid_points = grid_points;
  out.levels = limit_recursion(ctx, depth, grid_points);
  while (true) {
    auto finer = limit_recursion(ctx, depth, 2 * out.grid_points);
    out.doubling_change = std::fabs(out.levels.back().p.back() - finer.back().p.back());
    if (out.doubling_change < tolerance) {
      out.converged = true;
      return out;
    }
    if (2 * out.grid_points > max_points) return out;
    out.grid_points *= 2;
    out.levels = std::move(finer);
  }
}

SurvivalModel SurvivalModel::make(const RoundContext& ctx, std::uint64_t k, int depth, std::size_t grid_points,
                                  std::optional<double> zeta) {
  if (k == 0) throw std::invalid_argument("SurvivalModel: k must be >= 1");
  check_depth(depth);
  check_grid(grid_points);
  SurvivalModel model{ctx};
  model.k = k;
  model.depth = depth;
  model.grid_points = grid_points;
  model.n2 = k * k;

  const double a = 2.0 * static_cast<double>(k) * ctx.Phi_at(ctx.round());
  if (zeta) {
    if (!(*zeta >= 0.1 && *zeta <= 0.9)) throw std::invalid_argument("SurvivalModel: zeta must lie in [0.1, 0.9]");
    model.zeta = *zeta;
    model.n1 = static_cast<std::uint64_t>(std::llround(*zeta * a));
    return model;
  }
  model.zeta = 0.1;
  if (a <= 0.0) return model;
  const double first = std::ceil(0.1 * a - 1e-12);
  if (first <= 0.9 * a) {
    model.n1 = static_cast<std::uint64_t>(first);
    model.zeta = std::max(0.1, first / a);
  } else {
    model.n1 = static_cast<std::uint64_t>(std::llround(0.1 * a));
  }
  return model;
}

std::vector<SurvivalCurve> finite_m_recursion(const SurvivalModel& model) {
  const double m = model.m();
  const double n1 = static_cast<double>(model.n1);
  const double n2 = static_cast<double>(model.n2);

  std::vector<SurvivalCurve> levels;
  levels.reserve(static_cast<std::size_t>(model.depth) + 1);
  levels.push_back(level_zero(survival_grid(model.ctx, model.grid_points)));
  for (int l = 1; l <= model.depth; ++l) {
    const SurvivalCurve& prev = levels.back();
    SurvivalCurve next;
    next.x = prev.x;
    next.p.resize(prev.x.size());
    for (std::size_t j = 0; j < prev.x.size(); ++j) {
      const double P = prev.P[j];
      const double q = P / m;
      double log_p = 0.0;
      if (model.n1 > 0) log_p += n1 * std::log1p(-P / (model.zeta * m));
      if (model.n2 > 0) log_p += n2 * std::log1p(-q * q);
      next.p[j] = std::exp(log_p);
    }
    next.P = cumulative_trapezoid(next.x, next.p);
    levels.push_back(std::move(next));
  }
  return levels;
}

McEstimate simulate_tree(const SurvivalModel& model, double x, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("simulate_tree: trials must be >= 1000");
  if (!(x >= 0.0)) throw std::invalid_argument("simulate_tree: x must be >= 0");
  std::uint64_t survived = 0;
  const double m = model.m();
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto rng = StreamRng::for_stream(seed, t, model.ctx.round(), StreamPurpose::kTree);
    TreeSampler sampler{model, rng, m};
    survived += sampler.survives(x, model.depth) ? 1 : 0;
  }
  McEstimate est;
  est.trials = trials;
  est.mean = static_cast<double>(survived) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
  return est;
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& values, double x) {
  if (grid.empty() || grid.size() != values.size()) throw std::invalid_argument("interpolate: bad curve");
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), x) - grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

void write_curves_csv(std::ostream& out, const std::vector<SurvivalCurve>& levels, const RoundContext& ctx) {
  out << "level,x,p_l,P_l,p_closed\n";
  out.precision(17);
  std::vector<double> closed;
  if (!levels.empty()) {
    for (double x : levels.front().x) closed.push_back(closed_form(ctx, std::min(x, ctx.delta())).p);
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const SurvivalCurve& c = levels[l];
    for (std::size_t j = 0; j < c.x.size(); ++j) {
      out << l << ',' << c.x[j] << ',' << c.p[j] << ',' << c.P[j] << ',' << closed[j] << '\n';
    }
  }
}

}  // namespace greedygraph
