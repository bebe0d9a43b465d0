#include "greedygraph/numerics.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace greedygraph {
namespace {

// Series and asymptotic expansion agree to ~1e-16 relative at 6; at 4 the
// asymptotic series cannot do better than ~3e-8.
constexpr double kSeriesCutoff = 6.0;

double series_integral(double z) {
  // sum_j z^(2j+1) / (j! (2j+1)); every term is positive for z > 0.
  const double z2 = z * z;
  double power = z;  // z^(2j+1) / j!
  double sum = z;
  for (int j = 1; j < 400; ++j) {
    power *= z2 / j;
    const double term = power / (2 * j + 1);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

double asymptotic_integral(double z) {
  // exp(z^2)/(2z) * sum_k (2k-1)!! / (2z^2)^k, truncated at the smallest term.
  const double inv = 1.0 / (2.0 * z * z);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2 * k - 1) * inv;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return std::exp(z * z - std::log(2.0 * z)) * sum;
}

double checked_integral(double z) {
  if (!std::isfinite(z)) throw DomainError("erfi: non-finite argument");
  const double a = std::fabs(z);
  if (a > kErfiMaxArgument) {
    throw DomainError("erfi: |x| = " + std::to_string(a) + " exceeds " +
                      std::to_string(kErfiMaxArgument));
  }
  const double value = a <= kSeriesCutoff ? series_integral(a) : asymptotic_integral(a);
  if (!std::isfinite(value)) {
    throw DomainError("erfi: result overflows double range at |x| = " + std::to_string(a));
  }
  return std::copysign(value, z);
}

}  // namespace

double erfi_integral(double z) { return checked_integral(z); }

double erfi(double x) {
  const double value = checked_integral(x) * (2.0 / std::sqrt(std::numbers::pi));
  if (!std::isfinite(value)) throw DomainError("erfi: result overflows double range");
  return value;
}

double phi_big(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("Phi: argument must be finite and >= 0");
  if (x == 0.0) return 0.0;

  double lo = 0.0;
  double hi = std::sqrt(std::log(std::max(x, 2.0))) + 2.0;
  // The integral overflows a little above 26.7; the root for any finite x is below that.
  hi = std::min(hi, 26.7);
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (erfi_integral(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double z = 0.5 * (lo + hi);
  for (int step = 0; step < 3; ++step) {
    // d/dz int_0^z exp(t^2) dt = exp(z^2)
    const double residual = erfi_integral(z) - x;
    const double next = z - residual * std::exp(-z * z);
    if (!(next > 0.0) || !std::isfinite(next)) break;
    z = next;
  }
  return z;
}

double phi_small(double x) {
  const double z = phi_big(x);
  return std::exp(-z * z);
}

std::uint64_t floor_power(std::uint64_t n, double eps) {
  const long double t = eps * std::log(static_cast<long double>(n));
  const long double approx = std::exp(t);
  const long double nearest = std::round(approx);
  // eps is a double, so n^eps within a few double ulps of an integer is that integer.
  if (nearest >= 1.0L && std::fabs(std::log(nearest) - t) <= 8 * DBL_EPSILON * std::max(1.0L, t)) {
    return static_cast<std::uint64_t>(nearest);
  }
  auto k = static_cast<std::uint64_t>(std::floor(approx));
  while (std::log(static_cast<long double>(k + 1)) <= t) ++k;
  while (k > 1 && std::log(static_cast<long double>(k)) > t) --k;
  return std::max<std::uint64_t>(k, 1);
}

RoundContext RoundContext::make(std::uint64_t n, double eps) {
  if (n < 3) throw std::invalid_argument("RoundContext: n must be >= 3");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("RoundContext: eps must lie in (0, 1/2)");

  RoundContext ctx;
  ctx.n_ = n;
  ctx.eps_ = eps;
  ctx.k_ = floor_power(n, eps);
  const std::uint64_t rounds = ctx.k_ * ctx.k_;
  if (rounds > 10'000'000) throw std::invalid_argument("RoundContext: I = k^2 too large to tabulate");

  auto tables = std::make_shared<Tables>();
  const double delta = ctx.delta();
  tables->Phi.resize(rounds + 1);
  tables->phi.resize(rounds + 1);
  tables->gamma.resize(rounds + 1);
  tables->Gamma.resize(rounds + 1);
  for (std::uint64_t i = 0; i <= rounds; ++i) {
    const double Phi = phi_big(static_cast<double>(i) * delta);
    const double phi = std::exp(-Phi * Phi);
    tables->Phi[i] = Phi;
    tables->phi[i] = phi;
    tables->gamma[i] = std::max(delta * Phi * phi, delta * delta * phi * phi);
  }
  tables->Gamma[0] = std::exp(-30.0 * eps * std::log(static_cast<double>(n)));
  for (std::uint64_t i = 1; i <= rounds; ++i) {
    tables->Gamma[i] = tables->Gamma[i - 1] * (1.0 + 10.0 * tables->gamma[i - 1]);
  }
  ctx.tables_ = std::move(tables);
  return ctx;
}

RoundContext RoundContext::at_round(std::uint64_t i) const {
  check_index(i);
  RoundContext copy = *this;
  copy.round_ = i;
  return copy;
}

void RoundContext::check_index(std::uint64_t i) const {
  if (i > total_rounds()) {
    throw std::out_of_range("round index " + std::to_string(i) + " exceeds I = " +
                            std::to_string(total_rounds()));
  }
}

double RoundContext::Phi_at(std::uint64_t i) const {
  check_index(i);
  return tables_->Phi[i];
}

double RoundContext::phi_at(std::uint64_t i) const {
  check_index(i);
  return tables_->phi[i];
}

double RoundContext::gamma_at(std::uint64_t i) const {
  check_index(i);
  return tables_->gamma[i];
}

double RoundContext::Gamma_at(std::uint64_t i) const {
  check_index(i);
  return tables_->Gamma[i];
}

ErrorWindow error_window(const RoundContext& ctx) {
  return {ctx.gamma_at(ctx.round()), ctx.Gamma_at(ctx.round())};
}

double varphi(const RoundContext& ctx, std::uint64_t i) {
  if (i >= ctx.total_rounds()) {
    throw std::out_of_range("varphi: round " + std::to_string(i) + " must be < I");
  }
  return (ctx.Phi_at(i + 1) - ctx.Phi_at(i)) / ctx.delta();
}

}  // namespace greedygraph
