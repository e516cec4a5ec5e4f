#pragma once

#include "kmu/aep.hpp"

namespace kmu::aep::detail {

struct SeriesSum {
  double scaled = 0.0;  // series value times exp(log_scale)
  int terms = 0;
  bool converged = false;
};

/// Tolerance for the hypergeometric factors inside the k-series; the
/// iteration budget is large because 2F1(1/2, n; n+1; z) converges slowly as
/// z -> 1.
const Tolerance& hyper_tol();

/// GC-DQPSK k-series with every term multiplied by exp(log_scale). nu = omega = 0
/// with max_terms = 1 gives the high-SNR form.
SeriesSum dqpsk_series(const Params& p, double nu, double omega, const awgn::ChiFitRow& row, double log_scale,
                       int max_terms, double rel_tol);

}  // namespace kmu::aep::detail
