#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace greedygraph {

/// Thrown when a scalar function is evaluated outside its supported domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Arguments with |x| above this are rejected outright.
inline constexpr double kErfiMaxArgument = 150.0;

/// Imaginary error function, erfi(x) = (2/sqrt(pi)) * int_0^x exp(t^2) dt.
///
/// Power series for |x| <= 6, asymptotic expansion beyond. Relative error is
/// below 1e-13 wherever the result is representable. Throws DomainError for
/// non-finite x, |x| > kErfiMaxArgument, or a result that overflows double
/// (|x| above roughly 26.7).
double erfi(double x);

/// int_0^z exp(t^2) dt, i.e. (sqrt(pi)/2) * erfi(z). This is the quantity the
/// inversion in phi_big() works with, so it is exposed directly.
double erfi_integral(double z);

/// Phi(x): the unique z >= 0 with (sqrt(pi)/2) erfi(z) = x.
/// Solves Phi' = exp(-Phi^2), Phi(0) = 0. Requires x >= 0.
double phi_big(double x);

/// phi(x) = exp(-Phi(x)^2) = Phi'(x).
double phi_small(double x);

/// Round structure of the process for given (n, eps).
///
/// k = floor(n^eps), delta = 1/k, I = k^2 rounds. Phi(i*delta), phi(i*delta)
/// and the error window Gamma(i) are tabulated eagerly for i = 0..I; the
/// tables are shared between copies, so at_round() is cheap.
class RoundContext {
 public:
  /// Throws std::invalid_argument unless n >= 3 and 0 < eps < 1/2.
  static RoundContext make(std::uint64_t n, double eps);

  RoundContext at_round(std::uint64_t i) const;

  std::uint64_t n() const { return n_; }
  double eps() const { return eps_; }
  std::uint64_t k() const { return k_; }
  double delta() const { return 1.0 / static_cast<double>(k_); }
  std::uint64_t total_rounds() const { return k_ * k_; }
  std::uint64_t round() const { return round_; }

  /// Phi(i*delta) and phi(i*delta) from the memo table, 0 <= i <= I.
  double Phi_at(std::uint64_t i) const;
  double phi_at(std::uint64_t i) const;
  /// gamma(i) and Gamma(i) from the memo table, 0 <= i <= I.
  double gamma_at(std::uint64_t i) const;
  double Gamma_at(std::uint64_t i) const;

 private:
  struct Tables {
    std::vector<double> Phi;
    std::vector<double> phi;
    std::vector<double> gamma;
    std::vector<double> Gamma;
  };

  RoundContext() = default;
  void check_index(std::uint64_t i) const;

  std::uint64_t n_ = 0;
  double eps_ = 0.0;
  std::uint64_t k_ = 1;
  std::uint64_t round_ = 0;
  std::shared_ptr<const Tables> tables_;
};

/// floor(n^eps) with the boundary case n^eps integral resolved exactly.
std::uint64_t floor_power(std::uint64_t n, double eps);

struct ErrorWindow {
  double gamma;  // max{delta Phi phi, delta^2 phi^2} at i*delta
  double Gamma;  // accumulated multiplicative window
};

/// gamma(i) and Gamma(i) for the context's current round.
ErrorWindow error_window(const RoundContext& ctx);

/// (Phi((i+1)delta) - Phi(i delta)) / delta for 0 <= i < I.
/// Throws std::out_of_range if i >= I.
double varphi(const RoundContext& ctx, std::uint64_t i);

}  // namespace greedygraph
