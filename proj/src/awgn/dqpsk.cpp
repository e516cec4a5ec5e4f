#include <cmath>
#include <numbers>

#include "kmu/awgn.hpp"

namespace kmu::awgn {

namespace {

void check_gamma(double gamma, const char* name) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError(std::string(name) + ": gamma must be finite and >= 0");
}

DqpskConstants make_constants() {
  const double r = std::sqrt(0.5);
  const double a = std::sqrt(2.0 * (1.0 - r));
  const double b = std::sqrt(2.0 * (1.0 + r));
  const double delta = std::sqrt(b / a);
  return {a, b, delta, (1.0 - delta * delta) / delta};
}

}  // namespace

const DqpskConstants& dqpsk_constants() {
  static const DqpskConstants k = make_constants();
  return k;
}

double bessel_term(double gamma) {
  check_gamma(gamma, "bessel_term");
  const double x = std::numbers::sqrt2 * gamma;
  return specfun::bessel_i0_scaled(x) * std::exp((std::numbers::sqrt2 - 2.0) * gamma);
}

double k_term(double gamma) {
  check_gamma(gamma, "k_term");
  const DqpskConstants& k = dqpsk_constants();
  const double s = std::sqrt(gamma);
  return specfun::gauss_q((k.b - k.a) * s) - specfun::gauss_q((k.b + k.a) * s);
}

double dqpsk_bep_exact(double gamma, const Tolerance& tol) {
  check_gamma(gamma, "dqpsk_bep_exact");
  const DqpskConstants& k = dqpsk_constants();
  const double s = std::sqrt(gamma);
  return specfun::marcum_q1(k.a * s, k.b * s, tol) - 0.5 * bessel_term(gamma);
}

double dqpsk_bep_lower(double gamma) {
  return dqpsk_constants().delta * k_term(gamma) - 0.5 * bessel_term(gamma);
}

double dqpsk_bep_upper(double gamma) {
  return k_term(gamma) / dqpsk_constants().delta + 0.5 * bessel_term(gamma);
}

double chi_exact(double gamma, const Tolerance& tol) {
  const DqpskConstants& k = dqpsk_constants();
  const double kt = k_term(gamma);
  const double bt = bessel_term(gamma);
  const double lower = k.delta * kt - 0.5 * bt;
  const double width = k.eta * kt + bt;  // U - L
  if (!(std::fabs(width) >= 1e-300)) throw DomainError("chi_exact: degenerate denominator U - L");
  return (dqpsk_bep_exact(gamma, tol) - lower) / width;
}

double ChiFitRow::operator()(double gamma) const {
  return c0 * std::exp(-d0 * gamma) + c1 * std::exp(-d1 * gamma);
}

ChiFitTable ChiFitTable::published() {
  ChiFitTable t;
  t.rows = {{0.0, 1.0, 0.1786, 2.903, 0.7564, 0.1307},
            {1.0, 8.0, 0.3798, 1.895, 0.6183, 7.93e-4},
            {8.0, specfun::kInf, 0.005206, 0.2764, 0.6146, 5.593e-5}};
  return t;
}

std::size_t ChiFitTable::row_index(double gamma) const {
  if (!(gamma >= 0.0)) throw DomainError("ChiFitTable: gamma must be >= 0");
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].contains(gamma)) return i;
  throw DomainError("ChiFitTable: no row covers gamma");
}

void ChiFitTable::validate() const {
  if (rows.empty()) throw DomainError("ChiFitTable: no rows");
  if (rows.front().lo != 0.0) throw DomainError("ChiFitTable: first row must start at 0");
  if (rows.back().hi != specfun::kInf) throw DomainError("ChiFitTable: last row must extend to infinity");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ChiFitRow& r = rows[i];
    if (!(r.lo < r.hi)) throw DomainError("ChiFitTable: empty range");
    if (i + 1 < rows.size() && r.hi != rows[i + 1].lo) throw DomainError("ChiFitTable: ranges must be contiguous");
    if (!(r.c0 >= 0.0 && r.d0 >= 0.0 && r.c1 >= 0.0 && r.d1 >= 0.0))
      throw DomainError("ChiFitTable: coefficients must be non-negative");
  }
}

double chi_fitted(double gamma, const ChiFitTable& table) { return table.row_for(gamma)(gamma); }

double dqpsk_bep_approx(double gamma, const ChiFitRow& row) {
  const double chi = row(gamma);
  return chi * dqpsk_bep_upper(gamma) + (1.0 - chi) * dqpsk_bep_lower(gamma);
}

double dqpsk_bep_approx(double gamma, const ChiFitTable& table) {
  return dqpsk_bep_approx(gamma, table.row_for(gamma));
}

CombinedCoefficients CombinedCoefficients::from_row(const ChiFitRow& row) {
  const double d2 = dqpsk_constants().delta * dqpsk_constants().delta;
  CombinedCoefficients cc;
  cc.C = {row.c0, row.c1, d2 / (1.0 - d2)};
  cc.D = {row.d0, row.d1, 0.0};
  cc.F = {row.c0, row.c1, -0.5};
  return cc;
}

double dqpsk_bep_combined(double gamma, const CombinedCoefficients& cc) {
  const double kt = k_term(gamma);
  const double bt = bessel_term(gamma);
  double k_part = 0.0;
  double i_part = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double e = std::exp(-cc.D[i] * gamma);
    k_part += cc.C[i] * e;
    i_part += cc.F[i] * e;
  }
  return dqpsk_constants().eta * k_part * kt + i_part * bt;
}

double marcum_q1_approx(double gamma, const ChiFitTable& table) {
  const DqpskConstants& k = dqpsk_constants();
  const double chi = chi_fitted(gamma, table);
  return k_term(gamma) * (k.eta * chi + k.delta) + bessel_term(gamma) * chi;
}

}  // namespace kmu::awgn
