#include <cmath>
#include <numbers>
#include <string>

#include "kmu/awgn.hpp"

namespace kmu::awgn {

namespace {

bool is_power_of_two(int m) { return m >= 2 && (m & (m - 1)) == 0; }

}  // namespace

ModulationSpec ModulationSpec::mpsk(int m) {
  ModulationSpec s{Kind::Mpsk, m};
  s.validate();
  return s;
}

ModulationSpec ModulationSpec::gc_dqpsk() { return {Kind::GcDqpsk, 4}; }

ModulationSpec ModulationSpec::parse(const std::string& text) {
  if (text == "dqpsk" || text == "gc-dqpsk") return gc_dqpsk();
  const std::string prefix = "mpsk:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    int m = 0;
    try {
      m = std::stoi(text.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      throw DomainError("scheme: bad order in '" + text + "'");
    }
    if (used != text.size() - prefix.size()) throw DomainError("scheme: bad order in '" + text + "'");
    return mpsk(m);
  }
  throw DomainError("scheme: expected 'mpsk:M' or 'dqpsk', got '" + text + "'");
}

std::string ModulationSpec::to_string() const {
  return kind == Kind::Mpsk ? "mpsk:" + std::to_string(order) : "dqpsk";
}

void ModulationSpec::validate() const {
  if (kind == Kind::Mpsk && !is_power_of_two(order))
    throw DomainError("M-PSK order must be a power of two >= 2, got " + std::to_string(order));
}

MpskCoefficients mpsk_coefficients(int M) {
  if (!is_power_of_two(M) || M > (1 << 24))
    throw DomainError("M-PSK order must be a power of two in [2, 2^24], got " + std::to_string(M));
  using std::numbers::pi;
  const double m = M;
  const double s = std::sin(pi / m);
  const double rho = std::log2(m) * s * s;
  auto sec2 = [](double x) {
    const double c = std::cos(x);
    return 1.0 / (c * c);
  };

  MpskCoefficients c;
  c.order = M;
  c.rho = rho;
  c.A = {(7.0 * m - 8.0) / (48.0 * m), 0.125, 0.125, 0.125,
         (m - 2.0) / (12.0 * m), (m - 2.0) / (6.0 * m), (m - 2.0) / (6.0 * m)};
  c.B = {rho,
         2.0 * rho,
         20.0 * rho / 3.0,
         20.0 * rho / 17.0,
         rho * sec2((m - 2.0) * pi / (2.0 * m)),
         rho * sec2((m - 2.0) * pi / (6.0 * m)),
         rho * sec2((m - 2.0) * pi / (3.0 * m))};
  return c;
}

double mpsk_sep_exact(int M, double gamma, const Tolerance& tol) {
  const MpskCoefficients c = mpsk_coefficients(M);
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("mpsk_sep_exact: gamma must be finite and >= 0");
  const double upper = (M - 1.0) * std::numbers::pi / M;
  if (gamma == 0.0) return (M - 1.0) / M;
  const double k = c.rho * gamma;
  auto f = [k](double theta) {
    const double s = std::sin(theta);
    return s == 0.0 ? 0.0 : std::exp(-k / (s * s));
  };
  return specfun::integrate_adaptive(f, 0.0, upper, tol) / std::numbers::pi;
}

double mpsk_sep_approx(const MpskCoefficients& c, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("mpsk_sep_approx: gamma must be >= 0");
  double sum = 0.0;
  for (std::size_t l = 0; l < c.A.size(); ++l) sum += c.A[l] * std::exp(-c.B[l] * gamma);
  return sum;
}

double mpsk_sep_approx(int M, double gamma) { return mpsk_sep_approx(mpsk_coefficients(M), gamma); }

double relative_error(double approx, double exact) {
  if (!(exact > 0.0)) throw DomainError("relative_error: exact value must be > 0");
  return std::fabs(approx - exact) / exact;
}

double ep_exact(const ModulationSpec& scheme, double gamma, const Tolerance& tol) {
  return scheme.is_mpsk() ? mpsk_sep_exact(scheme.order, gamma, tol) : dqpsk_bep_exact(gamma, tol);
}

double ep_approx(const ModulationSpec& scheme, double gamma, const ChiFitTable& table) {
  return scheme.is_mpsk() ? mpsk_sep_approx(scheme.order, gamma) : dqpsk_bep_approx(gamma, table);
}

double ep_decay_rate(const ModulationSpec& scheme) {
  if (scheme.is_mpsk()) return mpsk_coefficients(scheme.order).rho;
  const DqpskConstants& k = dqpsk_constants();
  return 0.5 * (k.b - k.a) * (k.b - k.a);
}

}  // namespace kmu::awgn
