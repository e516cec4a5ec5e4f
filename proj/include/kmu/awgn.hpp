#pragma once

// Conditional (instantaneous-SNR) error probabilities over AWGN.
//
// gamma is the linear SNR per bit throughout.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kmu/specfun.hpp"

namespace kmu::awgn {

using specfun::Tolerance;

/// Modulation targeted by an error-probability query.
struct ModulationSpec {
  enum class Kind { Mpsk, GcDqpsk };
  Kind kind = Kind::GcDqpsk;
  int order = 4;  // M for M-PSK; always 4 for GC-DQPSK

  static ModulationSpec mpsk(int m);
  static ModulationSpec gc_dqpsk();

  /// Parses "mpsk:M" or "dqpsk".
  static ModulationSpec parse(const std::string& text);
  std::string to_string() const;

  bool is_mpsk() const { return kind == Kind::Mpsk; }
  void validate() const;
};

// ---------------------------------------------------------------------------
// M-PSK

struct MpskCoefficients {
  int order = 0;
  double rho = 0.0;  // log2(M) sin^2(pi/M)
  std::array<double, 7> A{};
  std::array<double, 7> B{};
};

/// Throws DomainError unless M is a power of two >= 2.
MpskCoefficients mpsk_coefficients(int M);

/// (1/pi) int_0^{(M-1)pi/M} exp(-rho gamma / sin^2 theta) dtheta.
double mpsk_sep_exact(int M, double gamma, const Tolerance& tol = {});

/// sum_l A_l exp(-B_l gamma).
double mpsk_sep_approx(int M, double gamma);
double mpsk_sep_approx(const MpskCoefficients& c, double gamma);

// ---------------------------------------------------------------------------
// GC-DQPSK

struct DqpskConstants {
  double a;      // sqrt(2 (1 - sqrt(0.5)))
  double b;      // sqrt(2 (1 + sqrt(0.5)))
  double delta;  // sqrt(b / a)
  double eta;    // (1 - delta^2) / delta
};

const DqpskConstants& dqpsk_constants();

/// I_0(sqrt(2) gamma) e^{-2 gamma}, assembled from the scaled Bessel function.
double bessel_term(double gamma);

/// K = Q((b-a) sqrt(gamma)) - Q((b+a) sqrt(gamma)).
double k_term(double gamma);

/// Q_1(a sqrt(gamma), b sqrt(gamma)) - I_0(sqrt(2) gamma) e^{-2 gamma} / 2.
double dqpsk_bep_exact(double gamma, const Tolerance& tol = {});

/// delta K - I_0 e^{-2 gamma} / 2.
double dqpsk_bep_lower(double gamma);

/// K / delta + I_0 e^{-2 gamma} / 2.
double dqpsk_bep_upper(double gamma);

/// (H - L) / (U - L). Throws DomainError when |U - L| < 1e-300.
double chi_exact(double gamma, const Tolerance& tol = {});

/// C0 exp(-D0 gamma) + C1 exp(-D1 gamma) on [lo, hi).
struct ChiFitRow {
  double lo = 0.0;
  double hi = specfun::kInf;
  double c0 = 0.0, d0 = 0.0, c1 = 0.0, d1 = 0.0;

  double operator()(double gamma) const;
  bool contains(double gamma) const { return gamma >= lo && gamma < hi; }
};

struct ChiFitTable {
  std::vector<ChiFitRow> rows;

  /// Three-range fit: [0,1), [1,8), [8,inf).
  static ChiFitTable published();

  /// Index of the row whose range contains gamma.
  std::size_t row_index(double gamma) const;
  const ChiFitRow& row_for(double gamma) const { return rows[row_index(gamma)]; }

  /// Rows contiguous from 0 to inf, coefficients non-negative.
  void validate() const;
};

double chi_fitted(double gamma, const ChiFitTable& table = ChiFitTable::published());

/// chi~ U + (1 - chi~) L with the table row that contains gamma.
double dqpsk_bep_approx(double gamma, const ChiFitTable& table = ChiFitTable::published());

/// Same combination with one row used regardless of gamma.
double dqpsk_bep_approx(double gamma, const ChiFitRow& row);

/// Coefficients of the expansion
///   eta sum_i C_i e^{-D_i gamma} K + sum_i F_i e^{-(2 + D_i) gamma} I_0(sqrt(2) gamma).
struct CombinedCoefficients {
  std::array<double, 3> C{};
  std::array<double, 3> D{};
  std::array<double, 3> F{};

  static CombinedCoefficients from_row(const ChiFitRow& row);
};

double dqpsk_bep_combined(double gamma, const CombinedCoefficients& cc);

/// K (eta chi~ + delta) + I_0 e^{-2 gamma} chi~.
double marcum_q1_approx(double gamma, const ChiFitTable& table = ChiFitTable::published());

/// |approx - exact| / exact; exact must be > 0.
double relative_error(double approx, double exact);

// ---------------------------------------------------------------------------
// Scheme-generic dispatch

double ep_exact(const ModulationSpec& scheme, double gamma, const Tolerance& tol = {});
double ep_approx(const ModulationSpec& scheme, double gamma, const ChiFitTable& table = ChiFitTable::published());

/// Rate of the slowest exponential decay of the conditional EP in gamma.
double ep_decay_rate(const ModulationSpec& scheme);

// ---------------------------------------------------------------------------
// Fitting

struct TwoExpFit {
  double c0 = 0.0, d0 = 0.0, c1 = 0.0, d1 = 0.0;
  double rms = 0.0;
  int iterations = 0;
};

/// Least-squares fit of y ~ c0 e^{-d0 x} + c1 e^{-d1 x} with c, d >= 0.
/// Multi-start Levenberg-Marquardt; a single-exponential model is also tried
/// and kept when it fits as well. Canonical form: d0 >= d1 when both
/// amplitudes are non-zero, otherwise the surviving term sits in slot 0.
TwoExpFit fit_two_exponentials(std::span<const double> x, std::span<const double> y);

/// RMS of row(x_i) - y_i.
double fit_rms(const ChiFitRow& row, std::span<const double> x, std::span<const double> y);

struct ChiRefit {
  ChiFitTable table;
  std::vector<double> rms;  // per row
};

/// Refits each range [edges[i], edges[i+1]) against chi_exact on the grid
/// points inside it. The last edge may be +inf. Each range needs >= 20 points.
ChiRefit refit_chi(std::span<const double> gamma_grid, std::span<const double> range_edges);

}  // namespace kmu::awgn
