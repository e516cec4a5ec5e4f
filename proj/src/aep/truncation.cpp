#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kmu/aep.hpp"
#include "series.hpp"

namespace kmu::aep {

LambdaVariant parse_lambda_variant(std::string_view name) {
  if (name == "printed") return LambdaVariant::Printed;
  if (name == "pochhammer") return LambdaVariant::Pochhammer;
  if (name == "dominated") return LambdaVariant::Dominated;
  throw DomainError("unknown truncation variant '" + std::string(name) + "'");
}

std::string to_string(LambdaVariant v) {
  switch (v) {
    case LambdaVariant::Printed: return "printed";
    case LambdaVariant::Pochhammer: return "pochhammer";
    case LambdaVariant::Dominated: return "dominated";
  }
  return "?";
}

namespace {

double require_below_one(double x, const char* what) {
  if (!(x >= 0.0 && x < 1.0)) {
    std::ostringstream os;
    os << "truncation_bound: infeasible argument, " << what << " = " << x << " is not in [0, 1)";
    throw DomainError(os.str());
  }
  return x;
}

// log of sum_{k >= L} (m)_k x^k / k! = (m)_L x^L / L! * 2F1(1, m+L; L+1; x)
double log_negative_binomial_tail(double m, int L, double x) {
  const double ln_poch = specfun::ln_gamma(m + L) - specfun::ln_gamma(m);
  return ln_poch + L * std::log(x) - specfun::ln_gamma(L + 1.0) +
         specfun::ln_gauss_2f1(1.0, m + L, L + 1.0, x, detail::hyper_tol());
}

}  // namespace

double truncation_bound(const Params& p, int L, const ChiSelection& chi, LambdaVariant variant) {
  if (L < 1) throw DomainError("truncation_bound: L must be >= 1");
  const fading::DerivedConstants dc = fading::derived_constants(p);
  if (dc.omega == 0.0) return 0.0;  // every k >= 1 term vanishes

  const awgn::DqpskConstants& k = awgn::dqpsk_constants();
  const awgn::CombinedCoefficients cc = awgn::CombinedCoefficients::from_row(chi.resolve(p.gamma_bar));
  const std::array<double, 2> c2 = {(k.b - k.a) * (k.b - k.a), (k.b + k.a) * (k.b + k.a)};
  const double mu = p.mu;
  const double m = p.m;
  const double ln_gamma_mu = specfun::ln_gamma(mu);
  // Gamma(n + 1/2) / Gamma(n + 1) <= 1 only for n >= ~0.77; cover smaller n.
  const double theta_fix = std::max(0.0, specfun::ln_gamma(mu + L + 0.5) - specfun::ln_gamma(mu + L + 1.0));

  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double xi = dc.nu + cc.D[i];
    double eps1 = 0.0;
    for (double c : c2) {
      const double A = c + 2.0 * xi;
      const double x = require_below_one(2.0 * dc.omega / A, "2 omega / ((b -+ a)^2 + 2 xi)");
      const double z = 2.0 * xi / A;
      const double ln_theta = mu * std::log(2.0 / A) + ln_gamma_mu + theta_fix;
      const double ln_e1 = ln_theta + log_negative_binomial_tail(m, L, x) - 0.5 * std::log1p(-z) -
                           std::log(2.0 * std::sqrt(std::numbers::pi));
      eps1 += std::exp(ln_e1);
    }

    const double pp = 2.0 + xi;
    double ln_e2 = 0.0;
    if (variant == LambdaVariant::Dominated) {
      const double q = pp - std::numbers::sqrt2;
      const double x = require_below_one(dc.omega / q, "omega / (2 + xi - sqrt 2)");
      ln_e2 = ln_gamma_mu - mu * std::log(q) + log_negative_binomial_tail(m, L, x);
    } else {
      const double x = require_below_one(dc.omega / pp, "omega / (2 + xi)");
      const double n = mu + L;
      double ln_lambda = ln_gamma_mu + L * std::log(dc.omega) - specfun::ln_gamma(L + 1.0) - n * std::log(pp);
      if (variant == LambdaVariant::Printed)
        ln_lambda -= specfun::ln_gamma(m + L) + specfun::ln_gamma(m);
      else
        ln_lambda += specfun::ln_gamma(m + L) - specfun::ln_gamma(m);
      const double ln_f1 = specfun::ln_gauss_2f1(0.5 * n, 0.5 * (n + 1.0), 1.0, 2.0 / (pp * pp), detail::hyper_tol());
      const double ln_f2 = specfun::ln_gauss_2f1(1.0, m + L, L + 1.0, x, detail::hyper_tol());
      ln_e2 = ln_lambda + ln_f1 + ln_f2;
    }
    total += std::fabs(cc.C[i]) * eps1 + std::fabs(cc.F[i] / k.eta) * std::exp(ln_e2);
  }
  return std::exp(dc.log_lambda - ln_gamma_mu) * std::fabs(k.eta) * total;
}

}  // namespace kmu::aep
