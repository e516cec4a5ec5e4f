#pragma once

// Scalar special functions and adaptive quadrature.
//
// Everything here is a pure function of its arguments and safe to call
// concurrently.

#include <functional>
#include <limits>
#include <span>

#include "kmu/errors.hpp"

namespace kmu::specfun {

/// Stopping rule shared by every iterative routine.
struct Tolerance {
  double rel = 1e-12;
  double abs = 1e-300;
  int max_iter = 10000;

  /// Throws DomainError if both tolerances are zero or max_iter < 1.
  void validate() const;

  Tolerance with_rel(double r) const {
    Tolerance t = *this;
    t.rel = r;
    return t;
  }
  Tolerance with_max_iter(int n) const {
    Tolerance t = *this;
    t.max_iter = n;
    return t;
  }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Gamma family

/// log Γ(x) for x > 0 (Lanczos, ~1e-15 relative).
double ln_gamma(double x);

/// log|Γ(x)| and sign of Γ(x) for any non-pole real x.
struct SignedLog {
  double log_abs;
  int sign;
};
SignedLog ln_gamma_signed(double x);

/// 1/Γ(x); zero at the poles.
double reciprocal_gamma(double x);

/// Rising factorial (x)_k = Γ(x+k)/Γ(x).
double pochhammer(double x, int k);

/// log (x)_k for x > 0.
double ln_pochhammer(double x, int k);

// ---------------------------------------------------------------------------
// Elementary-derived

/// Gaussian tail Q(x) = P(N(0,1) > x).
double gauss_q(double x);

/// log(e^a + e^b) without overflow; -inf is the additive identity.
double log_add_exp(double a, double b);

// ---------------------------------------------------------------------------
// Modified Bessel functions of the first kind

/// e^{-x} I_0(x), x >= 0.
double bessel_i0_scaled(double x);

/// e^{-x} I_1(x), x >= 0.
double bessel_i1_scaled(double x);

/// I_{1/2}(x) = 2 sinh(x) / sqrt(2 pi x), x > 0. Overflows to +inf past ~710;
/// use bessel_i_half_scaled for large arguments.
double bessel_i_half(double x);

/// e^{-x} I_{1/2}(x) = (1 - e^{-2x}) / sqrt(2 pi x), x > 0.
double bessel_i_half_scaled(double x);

// ---------------------------------------------------------------------------
// Marcum Q

/// First-order Marcum Q-function Q_1(alpha, beta), evaluated as a
/// Poisson-weighted sum of regularized upper incomplete gamma functions.
double marcum_q1(double alpha, double beta, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Hypergeometric functions

/// Kummer's confluent hypergeometric 1F1(a; b; z).
double kummer_1f1(double a, double b, double z, const Tolerance& tol = {});

/// log 1F1(a; b; z) for a > 0, b > 0, z >= 0 (all-positive series; never
/// overflows).
double ln_kummer_1f1(double a, double b, double z, const Tolerance& tol = {});

/// Gauss hypergeometric 2F1(a, b; c; z) for 0 <= z < 1.
double gauss_2f1(double a, double b, double c, double z, const Tolerance& tol = {});

/// log 2F1(a, b; c; z) for a, b, c > 0 and 0 <= z < 1 (positive terms).
double ln_gauss_2f1(double a, double b, double c, double z, const Tolerance& tol = {});

/// 1F0(a; -; z) = (1 - z)^{-a}, 0 <= z < 1.
double hyp_1f0(double a, double z);

// ---------------------------------------------------------------------------
// Quadrature

using Integrand = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration over [a, b]; b may be +inf, in
/// which case t = a + scale * u / (1 - u) maps the range onto [0, 1).
/// Throws ConvergenceError (estimate + error) when the tolerance is not met
/// within tol.max_iter panels.
QuadratureResult integrate_adaptive_ex(const Integrand& f, double a, double b,
                                       const Tolerance& tol = {}, double scale = 1.0);

double integrate_adaptive(const Integrand& f, double a, double b, const Tolerance& tol = {},
                          double scale = 1.0);

/// Integrates over consecutive intervals [breaks[i], breaks[i+1]] and sums.
/// The last break may be +inf. Intended for integrands of one sign, where
/// per-piece relative tolerance bounds the total relative error.
QuadratureResult integrate_pieces(const Integrand& f, std::span<const double> breaks,
                                  const Tolerance& tol = {}, double tail_scale = 1.0);

}  // namespace kmu::specfun
