#include <cmath>
#include <numbers>

#include "kmu/specfun.hpp"

namespace kmu::specfun {

void Tolerance::validate() const {
  if (!(rel >= 0.0) || !(abs >= 0.0)) throw DomainError("Tolerance: rel and abs must be >= 0");
  if (rel == 0.0 && abs == 0.0) throw DomainError("Tolerance: rel and abs cannot both be zero");
  if (max_iter < 1) throw DomainError("Tolerance: max_iter must be >= 1");
}

double gauss_q(double x) {
  if (!std::isfinite(x)) throw DomainError("gauss_q: non-finite argument");
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace kmu::specfun
