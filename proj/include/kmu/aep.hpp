#pragma once

// Error probabilities averaged over kappa-mu shadowed fading.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kmu/awgn.hpp"
#include "kmu/fading.hpp"

namespace kmu::aep {

using awgn::ModulationSpec;
using fading::Params;
using specfun::Tolerance;

struct SeriesControl {
  int max_terms = 500;     // L: the series keeps k = 0 .. L-1
  double rel_tol = 1e-12;  // early stop once three consecutive terms are below rel_tol * partial sum
  bool strict = true;      // throw ConvergenceError when L terms are not enough

  void validate() const;
};

struct AepResult {
  double value = 0.0;
  int terms_used = 0;
  double truncation_bound = 0.0;  // bound on the neglected tail k >= terms_used
  bool converged = false;
};

/// Which chi~ row the averaged DQPSK series uses. The closed form needs one
/// row for all gamma; Piecewise (the gamma-dependent table) is only valid for
/// the numerical oracles.
enum class ChiRangePolicy { FirstRow, MeanSnr, Fixed, Piecewise };

ChiRangePolicy parse_chi_policy(std::string_view name);
std::string to_string(ChiRangePolicy p);

struct ChiSelection {
  ChiRangePolicy policy = ChiRangePolicy::FirstRow;
  std::size_t fixed_row = 0;
  awgn::ChiFitTable table = awgn::ChiFitTable::published();

  /// Row used for mean SNR gamma_bar; DomainError for Piecewise.
  const awgn::ChiFitRow& resolve(double gamma_bar) const;
};

// ---------------------------------------------------------------------------
// Closed forms

/// lambda sum_l A_l (nu + B_l)^{-mu} (1 - omega / (nu + B_l))^{-m}.
double asep_mpsk_closed(const Params& p, int M);

/// Hypergeometric k-series for GC-DQPSK.
AepResult abep_dqpsk_closed(const Params& p, const SeriesControl& ctrl = {}, const ChiSelection& chi = {});

/// Closed form for either scheme; for M-PSK terms_used is 7 and the bound 0.
AepResult aep_closed(const Params& p, const ModulationSpec& scheme, const SeriesControl& ctrl = {},
                     const ChiSelection& chi = {});

/// log of the closed form, with lambda carried separately so that very small
/// values stay representable.
double log_aep_closed(const Params& p, const ModulationSpec& scheme, const SeriesControl& ctrl = {},
                      const ChiSelection& chi = {});

// ---------------------------------------------------------------------------
// High-SNR asymptotics

/// lambda sum_l A_l B_l^{-mu}.
double asep_mpsk_asymptotic(const Params& p, int M);

/// k = 0 term with xi_i = D_i.
double abep_dqpsk_asymptotic(const Params& p, const ChiSelection& chi = {});

double aep_asymptotic(const Params& p, const ModulationSpec& scheme, const ChiSelection& chi = {});

// ---------------------------------------------------------------------------
// Truncation error

/// Form of the second-integral tail factor.
///  Printed:    Gamma(mu) omega^L / (L! Gamma(m+L) Gamma(m) (2+xi)^{mu+L}) * 2F1 * 2F1
///  Pochhammer: Gamma(mu) (m)_L omega^L / (L! (2+xi)^{mu+L}) * 2F1 * 2F1
///  Dominated:  Gamma(mu) (p-sqrt2)^{-mu} (m)_L x^L / L! * 2F1(1, m+L; L+1; x), x = omega/(p-sqrt2)
enum class LambdaVariant { Printed, Pochhammer, Dominated };

LambdaVariant parse_lambda_variant(std::string_view name);
std::string to_string(LambdaVariant v);

/// Bound on |sum_{k >= L}| of the GC-DQPSK series; non-negative.
double truncation_bound(const Params& p, int L, const ChiSelection& chi = {},
                        LambdaVariant variant = LambdaVariant::Pochhammer);

// ---------------------------------------------------------------------------
// Oracles

enum class EpKind { Exact, Approx };

EpKind parse_ep_kind(std::string_view name);

/// int_0^inf f(gamma) H(gamma) dgamma by adaptive quadrature. For GC-DQPSK
/// with Approx the chi~ row follows `chi` (Piecewise uses the gamma-dependent
/// table).
double aep_quadrature_oracle(const Params& p, const ModulationSpec& scheme, EpKind which,
                             const Tolerance& tol = Tolerance{}.with_rel(1e-10), const ChiSelection& chi = {});

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// Semi-analytic Monte Carlo: mean of H(gamma_j) over sampled SNRs.
McEstimate aep_monte_carlo(const Params& p, const ModulationSpec& scheme, EpKind which,
                           const fading::McControl& mc, fading::Sampler sampler = fading::Sampler::InverseCdf,
                           const ChiSelection& chi = {});

// ---------------------------------------------------------------------------
// Diversity

struct DiversityPoint {
  double gamma_bar;    // linear
  double log_p;        // natural log of the closed-form AEP
  double ratio;        // -log P / log gamma_bar (NaN at gamma_bar = 1)
  double local_slope;  // -d log P / d log gamma_bar
};

/// gamma_bar of p is ignored; the grid (linear, ascending, >= 2 points) supplies it.
std::vector<DiversityPoint> diversity_order(const Params& p, const ModulationSpec& scheme,
                                            std::span<const double> gamma_bar_grid, const ChiSelection& chi = {});

}  // namespace kmu::aep
