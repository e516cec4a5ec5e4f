#include <algorithm>
#include <cmath>

#include "kmu/specfun.hpp"

namespace kmu::specfun {

namespace {

constexpr double kRescaleAt = 1e250;
const double kLnRescale = std::log(kRescaleAt);

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

bool near_integer(double x) { return std::fabs(x - std::round(x)) < 1e-9; }

// Generic hypergeometric series sum_k t_k with t_{k+1} = t_k * ratio(k).
// Stops once three consecutive terms are below tol relative to the partial
// sum, or when the series terminates (a zero numerator parameter).
template <class Ratio>
double generic_series(Ratio ratio, const Tolerance& tol, const char* name) {
  double term = 1.0;
  double sum = 1.0;
  int small = 0;
  for (int k = 0; k < tol.max_iter; ++k) {
    term *= ratio(k);
    sum += term;
    if (term == 0.0) return sum;
    if (std::fabs(term) <= tol.rel * std::fabs(sum) + tol.abs) {
      if (++small == 3) return sum;
    } else {
      small = 0;
    }
  }
  throw ConvergenceError(std::string(name) + ": series did not converge", sum, std::fabs(term));
}

// log of a positive-term series sum_k t_k, t_0 = 1, t_{k+1} = t_k * ratio(k).
// ratio_bound(k) must bound ratio(j) for every j > k; the tail after term k+1
// is then at most t_{k+1} R / (1 - R).
template <class Ratio, class Bound>
double positive_series_log(Ratio ratio, Bound ratio_bound, const Tolerance& tol, const char* name) {
  double ln_scale = 0.0;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < tol.max_iter; ++k) {
    term *= ratio(k);
    sum += term;
    if (sum > kRescaleAt) {
      sum /= kRescaleAt;
      term /= kRescaleAt;
      ln_scale += kLnRescale;
    }
    if (term == 0.0) return ln_scale + std::log(sum);
    const double r = ratio_bound(k);
    if (r < 1.0 && term * r / (1.0 - r) <= tol.rel * sum) return ln_scale + std::log(sum);
  }
  throw ConvergenceError(std::string(name) + ": series did not converge", std::exp(ln_scale) * sum,
                         std::exp(ln_scale) * term);
}

// ---------------------------------------------------------------------------
// 1F1

double ln_kummer_series(double a, double b, double z, const Tolerance& tol) {
  auto ratio = [=](int k) { return (a + k) * z / ((b + k) * (k + 1.0)); };
  auto bound = [=](int k) {
    const double j = k + 1.0;
    return std::max(1.0, (a + j) / (b + j)) * z / (j + 1.0);
  };
  return positive_series_log(ratio, bound, tol, "kummer_1f1");
}

// 1F1(a;b;z) ~ Gamma(b)/Gamma(a) e^z z^{a-b} sum_s (b-a)_s (1-a)_s / (s! z^s).
// Returns false if the neglected z^{-a} branch is not negligible or the
// expansion does not reach the tolerance before diverging.
bool ln_kummer_asymptotic(double a, double b, double z, const Tolerance& tol, double& out) {
  if (z < 40.0) return false;
  double ln_other_ratio = 0.0;  // log of |neglected branch| / |leading branch|
  if (!is_nonpositive_integer(b - a)) {
    const SignedLog g = ln_gamma_signed(b - a);
    ln_other_ratio = -z + (b - 2.0 * a) * std::log(z) + ln_gamma(a) - g.log_abs;
  } else {
    ln_other_ratio = -kInf;
  }
  if (ln_other_ratio > std::log(tol.rel) - 5.0) return false;

  double term = 1.0;
  double sum = 1.0;
  for (int s = 0; s < 200; ++s) {
    const double next = term * (b - a + s) * (1.0 - a + s) / ((s + 1.0) * z);
    if (std::fabs(next) > std::fabs(term) && s > 0) return false;
    term = next;
    sum += term;
    if (std::fabs(term) <= tol.rel * 1e-2 * std::fabs(sum)) {
      if (sum <= 0.0) return false;
      out = ln_gamma(b) - ln_gamma(a) + z + (a - b) * std::log(z) + std::log(sum);
      return true;
    }
  }
  return false;
}

#ifdef __SIZEOF_FLOAT128__
using Wide = __float128;
constexpr double kWideEps = 1.93e-34;
#else
using Wide = long double;
constexpr double kWideEps = 1.1e-19;
#endif

// e^z 1F1(b-a; b; -z) for z < 0 and b - a < 0. The leading terms alternate,
// so the sum runs in extended precision with a cancellation check.
double kummer_negative_z(double a, double b, double z, const Tolerance& tol) {
  const Wide c = static_cast<Wide>(b) - static_cast<Wide>(a);  // exact
  const Wide wb = b;
  const Wide x = -z;
  const Wide huge = 1e300;
  Wide term = 1, sum = 1, sum_abs = 1;
  double ln_scale = 0.0;
  int small = 0;
  const int max_iter = std::max(tol.max_iter, static_cast<int>(std::min(-4.0 * z + 1000.0, 1e8)));
  int k = 0;
  for (; k < max_iter; ++k) {
    term *= (c + k) * x / ((wb + k) * (k + 1));
    sum += term;
    sum_abs += term < 0 ? -term : term;
    if (sum_abs > huge) {
      term /= huge;
      sum /= huge;
      sum_abs /= huge;
      ln_scale += std::log(1e300);
    }
    const double t = static_cast<double>(term < 0 ? -term : term);
    const double s = static_cast<double>(sum < 0 ? -sum : sum);
    if (k + 1 > static_cast<double>(-c) && t <= tol.rel * s) {
      if (++small == 3) break;
    } else {
      small = 0;
    }
  }
  const double s = static_cast<double>(sum);
  const double value = std::copysign(std::exp(std::log(std::fabs(s)) + ln_scale + z), s);
  const double err = static_cast<double>(sum_abs) * kWideEps * 8.0;
  if (k == max_iter || !(err <= tol.rel * std::fabs(s)))
    throw ConvergenceError("kummer_1f1: cancellation exceeds the working precision", value,
                           std::fabs(value) * err / std::fabs(s));
  return value;
}

}  // namespace

double ln_kummer_1f1(double a, double b, double z, const Tolerance& tol) {
  tol.validate();
  if (!(a > 0.0) || !(b > 0.0) || !(z >= 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z))
    throw DomainError("ln_kummer_1f1: requires a > 0, b > 0, 0 <= z < inf");
  if (z == 0.0) return 0.0;
  double out = 0.0;
  if (ln_kummer_asymptotic(a, b, z, tol, out)) return out;
  return ln_kummer_series(a, b, z, tol.with_max_iter(std::max(tol.max_iter, static_cast<int>(4.0 * z) + 1000)));
}

double kummer_1f1(double a, double b, double z, const Tolerance& tol) {
  tol.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) throw DomainError("kummer_1f1: non-finite argument");
  if (is_nonpositive_integer(b)) throw DomainError("kummer_1f1: b must not be a non-positive integer");
  if (z == 0.0 || a == 0.0) return 1.0;
  if (is_nonpositive_integer(a)) {
    return generic_series([=](int k) { return (a + k) * z / ((b + k) * (k + 1.0)); }, tol, "kummer_1f1");
  }
  if (z < 0.0) {
    // Kummer transformation to a positive argument.
    if (b - a >= 0.0) return std::exp(z) * kummer_1f1(b - a, b, -z, tol);
    return kummer_negative_z(a, b, z, tol);
  }
  if (a > 0.0 && b > 0.0) return std::exp(ln_kummer_1f1(a, b, z, tol));
  return generic_series([=](int k) { return (a + k) * z / ((b + k) * (k + 1.0)); }, tol, "kummer_1f1");
}

// ---------------------------------------------------------------------------
// 2F1

namespace {

double direct_2f1(double a, double b, double c, double z, const Tolerance& tol) {
  auto ratio = [=](int k) { return (a + k) * (b + k) * z / ((c + k) * (k + 1.0)); };
  if (a > 0.0 && b > 0.0 && c > 0.0) {
    auto bound = [=](int k) {
      const double j = k + 1.0;
      // Past max(a, b, c) the coefficient ratio approaches 1 monotonically.
      if (j < std::max({a, b, c})) return 1.0;
      return z * std::max(1.0, (a + j) * (b + j) / ((c + j) * (j + 1.0)));
    };
    return std::exp(positive_series_log(ratio, bound, tol, "gauss_2f1"));
  }
  return generic_series(ratio, tol, "gauss_2f1");
}

double ln_direct_2f1(double a, double b, double c, double z, const Tolerance& tol) {
  auto ratio = [=](int k) { return (a + k) * (b + k) * z / ((c + k) * (k + 1.0)); };
  auto bound = [=](int k) {
    const double j = k + 1.0;
    if (j < std::max({a, b, c})) return 1.0;
    return z * std::max(1.0, (a + j) * (b + j) / ((c + j) * (j + 1.0)));
  };
  return positive_series_log(ratio, bound, tol, "gauss_2f1");
}

// z -> 1 - z connection formula for non-integer s = c - a - b. Returns false
// when the two branches cancel by more than three digits.
bool connection_2f1(double a, double b, double c, double z, const Tolerance& tol, double& out) {
  const double s = c - a - b;
  if (near_integer(s)) return false;
  const double w = 1.0 - z;
  const SignedLog gc = ln_gamma_signed(c);
  const SignedLog gs = ln_gamma_signed(s);
  const SignedLog gms = ln_gamma_signed(-s);

  double t1 = 0.0;
  if (!is_nonpositive_integer(c - a) && !is_nonpositive_integer(c - b)) {
    const SignedLog gca = ln_gamma_signed(c - a);
    const SignedLog gcb = ln_gamma_signed(c - b);
    const double coef = gc.sign * gs.sign * gca.sign * gcb.sign *
                        std::exp(gc.log_abs + gs.log_abs - gca.log_abs - gcb.log_abs);
    t1 = coef * direct_2f1(a, b, 1.0 - s, w, tol);
  }
  const SignedLog ga = ln_gamma_signed(a);
  const SignedLog gb = ln_gamma_signed(b);
  const double coef2 = gc.sign * gms.sign * ga.sign * gb.sign *
                       std::exp(gc.log_abs + gms.log_abs - ga.log_abs - gb.log_abs + s * std::log(w));
  const double t2 = coef2 * direct_2f1(c - a, c - b, 1.0 + s, w, tol);

  const double total = t1 + t2;
  if (!std::isfinite(total) || std::fabs(t1) + std::fabs(t2) > 1e3 * std::fabs(total)) return false;
  out = total;
  return true;
}

void check_2f1_args(double a, double b, double c, double z, const char* name) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
    throw DomainError(std::string(name) + ": non-finite argument");
  if (is_nonpositive_integer(c)) throw DomainError(std::string(name) + ": c must not be a non-positive integer");
  if (z < 0.0 || z >= 1.0) throw DomainError(std::string(name) + ": z must lie in [0, 1)");
}

}  // namespace

double gauss_2f1(double a, double b, double c, double z, const Tolerance& tol) {
  tol.validate();
  check_2f1_args(a, b, c, z, "gauss_2f1");
  if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return generic_series(
      [=](int k) { return (a + k) * (b + k) * z / ((c + k) * (k + 1.0)); }, tol, "gauss_2f1");
  if (z > 0.5) {
    double out = 0.0;
    if (connection_2f1(a, b, c, z, tol, out)) return out;
  }
  return direct_2f1(a, b, c, z, tol);
}

double ln_gauss_2f1(double a, double b, double c, double z, const Tolerance& tol) {
  tol.validate();
  check_2f1_args(a, b, c, z, "ln_gauss_2f1");
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) throw DomainError("ln_gauss_2f1: requires a, b, c > 0");
  if (z == 0.0) return 0.0;
  if (z > 0.5) {
    double out = 0.0;
    if (connection_2f1(a, b, c, z, tol, out) && out > 0.0) return std::log(out);
  }
  return ln_direct_2f1(a, b, c, z, tol);
}

double hyp_1f0(double a, double z) {
  if (!std::isfinite(a) || !std::isfinite(z)) throw DomainError("hyp_1f0: non-finite argument");
  if (z < 0.0 || z >= 1.0) throw DomainError("hyp_1f0: z must lie in [0, 1)");
  return std::pow(1.0 - z, -a);
}

}  // namespace kmu::specfun
