#include <algorithm>
#include <cmath>
#include <vector>

#include "kmu/fading.hpp"

namespace kmu::fading {

using specfun::kInf;

void Params::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(kappa) || !finite(mu) || !finite(m) || !finite(gamma_bar))
    throw DomainError("fading parameters must be finite");
  if (kappa < 0.0) throw DomainError("kappa must be >= 0");
  if (!(mu > 0.0)) throw DomainError("mu must be > 0");
  if (!(m > 0.0)) throw DomainError("m must be > 0");
  if (!(gamma_bar > 0.0)) throw DomainError("gamma_bar must be > 0");
}

DerivedConstants derived_constants(const Params& p) {
  p.validate();
  const double mk = p.mu * p.kappa + p.m;
  const double log_lambda = p.mu * std::log(p.mu) + p.m * std::log(p.m) + p.mu * std::log1p(p.kappa) -
                            p.mu * std::log(p.gamma_bar) - p.m * std::log(mk);
  if (!std::isfinite(log_lambda)) throw RangeError("derived_constants: log lambda is not finite");
  const double nu = p.mu * (1.0 + p.kappa) / p.gamma_bar;
  const double omega = p.mu * p.mu * p.kappa * (1.0 + p.kappa) / (p.gamma_bar * mk);
  return {log_lambda, std::exp(log_lambda), nu, omega};
}

namespace {

// log of lambda / Gamma(mu) * e^{-nu g} 1F1(m; mu; omega g), i.e. the density
// without its gamma^{mu-1} factor.
double log_kernel(const Params& p, const DerivedConstants& dc, double g, const Tolerance& tol) {
  double v = dc.log_lambda - specfun::ln_gamma(p.mu) - dc.nu * g;
  if (dc.omega > 0.0 && g > 0.0) v += specfun::ln_kummer_1f1(p.m, p.mu, dc.omega * g, tol);
  return v;
}

}  // namespace

double log_pdf(const Params& p, double gamma, const Tolerance& tol) {
  const DerivedConstants dc = derived_constants(p);
  if (!(gamma >= 0.0)) throw DomainError("pdf: gamma must be >= 0");
  if (gamma == kInf) return -kInf;
  if (gamma == 0.0) {
    if (p.mu < 1.0) return kInf;
    if (p.mu > 1.0) return -kInf;
    return log_kernel(p, dc, 0.0, tol);
  }
  return log_kernel(p, dc, gamma, tol) + (p.mu - 1.0) * std::log(gamma);
}

double pdf(const Params& p, double gamma, const Tolerance& tol) { return std::exp(log_pdf(p, gamma, tol)); }

specfun::QuadratureResult expectation(const Params& p, const std::function<double(double)>& h, const Tolerance& tol,
                                      double h_scale, double upper, std::span<const double> extra_breaks) {
  const DerivedConstants dc = derived_constants(p);
  if (!(h_scale > 0.0)) throw DomainError("expectation: h_scale must be > 0");
  if (!(upper >= 0.0)) throw DomainError("expectation: upper limit must be >= 0");
  if (upper == 0.0) return {};

  const double lo = std::min(p.gamma_bar, h_scale);
  const double hi = std::max(p.gamma_bar, h_scale);
  std::vector<double> breaks = {0.0};
  for (double f : {1e-4, 1e-3, 1e-2, 0.1, 0.3}) breaks.push_back(f * lo);
  for (double x = lo; x <= 30.0 * hi; x *= 3.0) breaks.push_back(x);
  breaks.insert(breaks.end(), extra_breaks.begin(), extra_breaks.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.erase(std::remove_if(breaks.begin() + 1, breaks.end(), [upper](double b) { return !(b < upper); }),
               breaks.end());
  breaks.push_back(upper);

  auto integrand = [&](double g) {
    const double hv = h(g);
    if (hv == 0.0) return 0.0;
    return std::exp(log_pdf(p, g, tol)) * hv;
  };

  specfun::QuadratureResult total;
  std::size_t start = 0;
  if (p.mu < 1.0) {
    // gamma = u^{1/mu}: f dgamma = lambda / (mu Gamma(mu)) e^{-nu gamma} 1F1 du.
    const double b1 = breaks[1];
    const double log_mu = std::log(p.mu);
    auto sub = [&](double u) {
      const double g = std::pow(u, 1.0 / p.mu);
      const double hv = h(g);
      if (hv == 0.0) return 0.0;
      return std::exp(log_kernel(p, dc, g, tol) - log_mu) * hv;
    };
    const double ub = b1 == kInf ? kInf : std::pow(b1, p.mu);
    total = specfun::integrate_adaptive_ex(sub, 0.0, ub, tol, std::pow(hi, p.mu));
    start = 1;
  }
  if (start + 1 < breaks.size()) {
    std::span<const double> rest(breaks.data() + start, breaks.size() - start);
    const specfun::QuadratureResult r = specfun::integrate_pieces(integrand, rest, tol, hi);
    total.value += r.value;
    total.error += r.error;
    total.panels += r.panels;
  }
  return total;
}

double cdf_numeric(const Params& p, double gamma, const Tolerance& tol) {
  p.validate();
  if (!(gamma >= 0.0)) throw DomainError("cdf_numeric: gamma must be >= 0");
  if (gamma == 0.0) return 0.0;
  const double v = expectation(p, [](double) { return 1.0; }, tol, p.gamma_bar, gamma).value;
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace kmu::fading
