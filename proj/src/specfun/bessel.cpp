#include <cmath>
#include <numbers>

#include "kmu/specfun.hpp"

namespace kmu::specfun {

namespace {

// Below this the ascending series is used; above it the Hankel expansion.
// The expansion's smallest term is ~e^{-2x}, so 20 leaves room under 1e-16.
constexpr double kAsymptoticFrom = 20.0;

void check_argument(double x, const char* name) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError(std::string(name) + ": argument must be finite and >= 0");
}

// e^{-x} I_nu(x) from sum_k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)), nu in {0, 1}.
double scaled_series(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = nu == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum * std::exp(-x);
}

// e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k.
double scaled_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::fabs(next) > std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_i0_scaled(double x) {
  check_argument(x, "bessel_i0_scaled");
  return x < kAsymptoticFrom ? scaled_series(0, x) : scaled_asymptotic(0, x);
}

double bessel_i1_scaled(double x) {
  check_argument(x, "bessel_i1_scaled");
  return x < kAsymptoticFrom ? scaled_series(1, x) : scaled_asymptotic(1, x);
}

double bessel_i_half(double x) {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("bessel_i_half: argument must be finite and > 0");
  return 2.0 * std::sinh(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_i_half_scaled(double x) {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("bessel_i_half_scaled: argument must be finite and > 0");
  return -std::expm1(-2.0 * x) / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace kmu::specfun
