#include <array>
#include <cmath>
#include <numbers>

#include "kmu/aep.hpp"
#include "series.hpp"

namespace kmu::aep {

void SeriesControl::validate() const {
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
  if (!(rel_tol > 0.0)) throw DomainError("SeriesControl: rel_tol must be > 0");
}

ChiRangePolicy parse_chi_policy(std::string_view name) {
  if (name == "first-row") return ChiRangePolicy::FirstRow;
  if (name == "mean-snr") return ChiRangePolicy::MeanSnr;
  if (name == "fixed") return ChiRangePolicy::Fixed;
  if (name == "piecewise") return ChiRangePolicy::Piecewise;
  throw DomainError("unknown chi policy '" + std::string(name) + "'");
}

std::string to_string(ChiRangePolicy p) {
  switch (p) {
    case ChiRangePolicy::FirstRow: return "first-row";
    case ChiRangePolicy::MeanSnr: return "mean-snr";
    case ChiRangePolicy::Fixed: return "fixed";
    case ChiRangePolicy::Piecewise: return "piecewise";
  }
  return "?";
}

const awgn::ChiFitRow& ChiSelection::resolve(double gamma_bar) const {
  if (table.rows.empty()) throw DomainError("ChiSelection: empty table");
  switch (policy) {
    case ChiRangePolicy::FirstRow: return table.rows.front();
    case ChiRangePolicy::MeanSnr: return table.row_for(gamma_bar);
    case ChiRangePolicy::Fixed:
      if (fixed_row >= table.rows.size()) throw DomainError("ChiSelection: fixed_row out of range");
      return table.rows[fixed_row];
    case ChiRangePolicy::Piecewise: break;
  }
  throw DomainError("ChiSelection: piecewise chi has no single-row closed form");
}

namespace detail {

const Tolerance& hyper_tol() {
  static const Tolerance t{1e-14, 1e-300, 4'000'000};
  return t;
}

SeriesSum dqpsk_series(const Params& p, double nu, double omega, const awgn::ChiFitRow& row, double log_scale,
                       int max_terms, double rel_tol) {
  const awgn::DqpskConstants& k = awgn::dqpsk_constants();
  const awgn::CombinedCoefficients cc = awgn::CombinedCoefficients::from_row(row);
  const std::array<double, 2> c2 = {(k.b - k.a) * (k.b - k.a), (k.b + k.a) * (k.b + k.a)};
  const double mu = p.mu;
  const double m = p.m;
  const double ln_omega = omega > 0.0 ? std::log(omega) : -specfun::kInf;
  const double inv_two_sqrt_pi = 0.5 / std::sqrt(std::numbers::pi);

  struct Component {
    double sum = 0.0;
    double log_coef = 0.0;  // log phi_k or log psi_k
    int small = 0;
  };

  SeriesSum out;
  double total = 0.0;
  bool all_converged = true;
  for (std::size_t i = 0; i < 3; ++i) {
    const double xi = nu + cc.D[i];
    std::array<Component, 3> comp{};  // M1(b-a), M1(b+a), M2
    std::array<double, 2> A{}, z{};
    for (int j = 0; j < 2; ++j) {
      A[j] = c2[j] + 2.0 * xi;
      z[j] = 2.0 * xi / A[j];
      comp[j].log_coef = mu * std::log(2.0 / A[j]) + specfun::ln_gamma(mu + 0.5) - std::log(mu);
    }
    const double p2 = 2.0 + xi;
    const double y = 2.0 / (p2 * p2);
    comp[2].log_coef = specfun::ln_gamma(mu) - mu * std::log(p2);

    int used = 0;
    bool converged = false;
    for (int kk = 0; kk < max_terms; ++kk) {
      const double n = mu + kk;
      used = kk + 1;
      bool all_small = true;
      for (int j = 0; j < 2; ++j) {
        const double f = specfun::gauss_2f1(0.5, n, n + 1.0, z[j], hyper_tol());
        const double t = std::exp(log_scale + comp[j].log_coef) * f * inv_two_sqrt_pi;
        comp[j].sum += t;
        comp[j].small = t <= rel_tol * comp[j].sum ? comp[j].small + 1 : 0;
        all_small = all_small && comp[j].small >= 3;
      }
      {
        const double lf = specfun::ln_gauss_2f1(0.5 * n, 0.5 * (n + 1.0), 1.0, y, hyper_tol());
        const double t = std::exp(log_scale + comp[2].log_coef + lf);
        comp[2].sum += t;
        comp[2].small = t <= rel_tol * comp[2].sum ? comp[2].small + 1 : 0;
        all_small = all_small && comp[2].small >= 3;
      }
      if (omega == 0.0 || all_small) {
        converged = true;
        break;
      }
      const double common = std::log(m + kk) + ln_omega - std::log(kk + 1.0);
      for (int j = 0; j < 2; ++j)
        comp[j].log_coef += common + std::log(2.0 / A[j]) + std::log(n + 0.5) - std::log(n + 1.0);
      comp[2].log_coef += common - std::log(p2);
    }
    out.terms = std::max(out.terms, used);
    all_converged = all_converged && converged;
    total += k.eta * cc.C[i] * (comp[0].sum - comp[1].sum) + cc.F[i] * comp[2].sum;
  }
  out.scaled = total;
  out.converged = all_converged;
  return out;
}

}  // namespace detail

double asep_mpsk_closed(const Params& p, int M) {
  const fading::DerivedConstants dc = fading::derived_constants(p);
  const awgn::MpskCoefficients c = awgn::mpsk_coefficients(M);
  double log_sum = -specfun::kInf;
  for (std::size_t l = 0; l < c.A.size(); ++l) {
    if (c.A[l] == 0.0) continue;
    const double base = dc.nu + c.B[l];
    const double shrink = 1.0 - dc.omega / base;
    if (!(base > 0.0) || !(shrink > 0.0)) throw DomainError("asep_mpsk_closed: non-positive base");
    log_sum = specfun::log_add_exp(log_sum, std::log(c.A[l]) - p.mu * std::log(base) - p.m * std::log(shrink));
  }
  return std::exp(dc.log_lambda + log_sum);
}

AepResult abep_dqpsk_closed(const Params& p, const SeriesControl& ctrl, const ChiSelection& chi) {
  ctrl.validate();
  const fading::DerivedConstants dc = fading::derived_constants(p);
  const awgn::ChiFitRow& row = chi.resolve(p.gamma_bar);
  const double log_scale = dc.log_lambda - specfun::ln_gamma(p.mu);
  const detail::SeriesSum s = detail::dqpsk_series(p, dc.nu, dc.omega, row, log_scale, ctrl.max_terms, ctrl.rel_tol);
  AepResult r;
  r.value = s.scaled;
  r.terms_used = s.terms;
  r.converged = s.converged;
  r.truncation_bound = dc.omega == 0.0 ? 0.0 : truncation_bound(p, s.terms, chi);
  if (!s.converged && ctrl.strict)
    throw ConvergenceError("abep_dqpsk_closed: series not converged within max_terms", r.value, r.truncation_bound);
  return r;
}

AepResult aep_closed(const Params& p, const ModulationSpec& scheme, const SeriesControl& ctrl,
                     const ChiSelection& chi) {
  scheme.validate();
  if (scheme.is_mpsk()) return {asep_mpsk_closed(p, scheme.order), 7, 0.0, true};
  return abep_dqpsk_closed(p, ctrl, chi);
}

double log_aep_closed(const Params& p, const ModulationSpec& scheme, const SeriesControl& ctrl,
                      const ChiSelection& chi) {
  scheme.validate();
  const fading::DerivedConstants dc = fading::derived_constants(p);
  if (scheme.is_mpsk()) {
    const awgn::MpskCoefficients c = awgn::mpsk_coefficients(scheme.order);
    double log_sum = -specfun::kInf;
    for (std::size_t l = 0; l < c.A.size(); ++l) {
      if (c.A[l] == 0.0) continue;
      const double base = dc.nu + c.B[l];
      log_sum = specfun::log_add_exp(
          log_sum, std::log(c.A[l]) - p.mu * std::log(base) - p.m * std::log1p(-dc.omega / base));
    }
    return dc.log_lambda + log_sum;
  }
  ctrl.validate();
  const detail::SeriesSum s = detail::dqpsk_series(p, dc.nu, dc.omega, chi.resolve(p.gamma_bar),
                                                   -specfun::ln_gamma(p.mu), ctrl.max_terms, ctrl.rel_tol);
  if (!s.converged && ctrl.strict)
    throw ConvergenceError("log_aep_closed: series not converged within max_terms", s.scaled, 0.0);
  if (!(s.scaled > 0.0)) throw RangeError("log_aep_closed: non-positive series value");
  return dc.log_lambda + std::log(s.scaled);
}

double asep_mpsk_asymptotic(const Params& p, int M) {
  const fading::DerivedConstants dc = fading::derived_constants(p);
  const awgn::MpskCoefficients c = awgn::mpsk_coefficients(M);
  double log_sum = -specfun::kInf;
  for (std::size_t l = 0; l < c.A.size(); ++l) {
    if (c.A[l] == 0.0) continue;
    log_sum = specfun::log_add_exp(log_sum, std::log(c.A[l]) - p.mu * std::log(c.B[l]));
  }
  return std::exp(dc.log_lambda + log_sum);
}

double abep_dqpsk_asymptotic(const Params& p, const ChiSelection& chi) {
  const fading::DerivedConstants dc = fading::derived_constants(p);
  const detail::SeriesSum s =
      detail::dqpsk_series(p, 0.0, 0.0, chi.resolve(p.gamma_bar), dc.log_lambda - specfun::ln_gamma(p.mu), 1, 1.0);
  return s.scaled;
}

double aep_asymptotic(const Params& p, const ModulationSpec& scheme, const ChiSelection& chi) {
  scheme.validate();
  return scheme.is_mpsk() ? asep_mpsk_asymptotic(p, scheme.order) : abep_dqpsk_asymptotic(p, chi);
}

}  // namespace kmu::aep
