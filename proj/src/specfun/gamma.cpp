#include <array>
#include <cmath>
#include <numbers>

#include "kmu/specfun.hpp"

namespace kmu::specfun {

namespace {

// Lanczos approximation, g = 671/128, 14 terms.
constexpr double kLanczosG = 5.24218750000000000;
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with the argument reduced first so large |x| keeps its accuracy.
double sin_pi(double x) {
  const double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  if (r == 0.0 || std::fabs(r) == 1.0) return 0.0;
  return std::sin(std::numbers::pi * r);
}

}  // namespace

double ln_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("ln_gamma: argument must be finite and > 0");
  if (x == 1.0 || x == 2.0) return 0.0;
  double y = x;
  double tmp = x + kLanczosG;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : kLanczos) ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

SignedLog ln_gamma_signed(double x) {
  if (!std::isfinite(x)) throw DomainError("ln_gamma_signed: non-finite argument");
  if (is_nonpositive_integer(x)) throw DomainError("ln_gamma_signed: pole of the gamma function");
  if (x > 0.0) return {ln_gamma(x), 1};
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
  const double s = sin_pi(x);
  return {std::log(std::numbers::pi) - std::log(std::fabs(s)) - ln_gamma(1.0 - x), s > 0 ? 1 : -1};
}

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  const SignedLog g = ln_gamma_signed(x);
  return g.sign * std::exp(-g.log_abs);
}

double pochhammer(double x, int k) {
  if (k < 0) throw DomainError("pochhammer: k must be non-negative");
  if (!std::isfinite(x)) throw DomainError("pochhammer: non-finite argument");
  if (k == 0) return 1.0;
  if (x > 0.0 && k > 200) return std::exp(ln_pochhammer(x, k));
  double p = 1.0;
  for (int i = 0; i < k; ++i) {
    p *= x + i;
    if (p == 0.0) break;
  }
  return p;
}

double ln_pochhammer(double x, int k) {
  if (k < 0) throw DomainError("ln_pochhammer: k must be non-negative");
  if (!(x > 0.0)) throw DomainError("ln_pochhammer: x must be > 0");
  if (k == 0) return 0.0;
  if (k <= 32) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += std::log(x + i);
    return s;
  }
  return ln_gamma(x + k) - ln_gamma(x);
}

}  // namespace kmu::specfun
