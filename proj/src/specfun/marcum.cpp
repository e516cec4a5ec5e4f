#include <algorithm>
#include <cmath>

#include "kmu/specfun.hpp"

namespace kmu::specfun {

// Q_1(alpha, beta) = sum_k Pois(k; alpha^2/2) * Q(k+1, beta^2/2), with Q the
// regularized upper incomplete gamma function. Terms are carried in log space
// so neither the Poisson weights (e^{-alpha^2/2}) nor Q(k+1, x) underflow.
//
// Term ratios r_k = t_{k+1}/t_k are non-increasing: the Poisson factor gives
// lambda/(k+1), and Q(k+2,x)/Q(k+1,x) is a ratio of a log-concave CDF. Once
// r < 1 the remaining tail is bounded by t_k r / (1 - r).
double marcum_q1(double alpha, double beta, const Tolerance& tol) {
  tol.validate();
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0.0 || beta < 0.0)
    throw DomainError("marcum_q1: alpha and beta must be finite and >= 0");
  if (beta == 0.0) return 1.0;

  const double lambda = 0.5 * alpha * alpha;
  const double x = 0.5 * beta * beta;
  if (lambda == 0.0) return std::exp(-x);

  // Q_1 <= exp(-(beta-alpha)^2/2) for beta > alpha; 1 - Q_1 <= exp(-(alpha-beta)^2/2) otherwise.
  const double half_gap_sq = 0.5 * (beta - alpha) * (beta - alpha);
  if (beta > alpha && half_gap_sq > 760.0) return 0.0;
  if (alpha > beta && half_gap_sq > 60.0) return 1.0;

  const double ln_lambda = std::log(lambda);
  const double ln_x = std::log(x);

  double ln_weight = -lambda;  // log Pois(0)
  double ln_partial = 0.0;     // log sum_{j<=k} x^j / j!
  double ln_power = 0.0;       // log x^k / k!
  double ln_term = ln_weight + ln_partial - x;
  double ln_sum = ln_term;

  for (int k = 1; k <= tol.max_iter; ++k) {
    const double ln_k = std::log(static_cast<double>(k));
    ln_weight += ln_lambda - ln_k;
    ln_power += ln_x - ln_k;
    ln_partial = log_add_exp(ln_partial, ln_power);
    const double ln_next = ln_weight + ln_partial - x;
    ln_sum = log_add_exp(ln_sum, ln_next);

    const double ln_ratio = ln_next - ln_term;
    ln_term = ln_next;
    if (ln_ratio < 0.0) {
      const double r = std::exp(ln_ratio);
      const double ln_tail = ln_term + std::log(r / (1.0 - r));
      const double ln_target = std::max(std::log(tol.rel) + ln_sum, std::log(tol.abs));
      if (ln_tail <= ln_target) return std::min(1.0, std::exp(ln_sum));
    }
  }
  throw ConvergenceError("marcum_q1: series did not converge", std::min(1.0, std::exp(ln_sum)),
                         std::exp(ln_term));
}

}  // namespace kmu::specfun
