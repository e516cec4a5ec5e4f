#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "kmu/specfun.hpp"

namespace kmu::specfun {

namespace {

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) and weights; the
// odd-indexed nodes are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::fabs(half);

  std::array<double, 7> f1{}, f2{};
  const double fc = f(centre);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  double result_abs = std::fabs(result_kronrod);

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double lo = f(centre - dx);
    const double hi = f(centre + dx);
    f1[jtw] = lo;
    f2[jtw] = hi;
    result_gauss += kWg[j] * (lo + hi);
    result_kronrod += kWgk[jtw] * (lo + hi);
    result_abs += kWgk[jtw] * (std::fabs(lo) + std::fabs(hi));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double lo = f(centre - dx);
    const double hi = f(centre + dx);
    f1[jtwm1] = lo;
    f2[jtwm1] = hi;
    result_kronrod += kWgk[jtwm1] * (lo + hi);
    result_abs += kWgk[jtwm1] * (std::fabs(lo) + std::fabs(hi));
  }

  const double mean = 0.5 * result_kronrod;
  double result_asc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) result_asc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

  result_kronrod *= half;
  result_abs *= abs_half;
  result_asc *= abs_half;
  double err = std::fabs((result_kronrod - result_gauss * half));
  if (result_asc != 0.0 && err != 0.0) err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * result_abs, err);
  return {a, b, result_kronrod, err};
}

QuadratureResult adaptive_finite(const Integrand& f, double a, double b, const Tolerance& tol) {
  std::vector<Panel> heap;
  Panel first = gauss_kronrod(f, a, b);
  if (!std::isfinite(first.value)) throw DomainError("integrate_adaptive: integrand is not finite");
  heap.push_back(first);
  double value = first.value;
  double error = first.error;
  double frozen_value = 0.0;  // panels too narrow to split further
  double frozen_error = 0.0;
  int panels = 1;

  auto target = [&] { return std::max(tol.abs, tol.rel * std::fabs(value)); };
  // Re-sum to shed the drift of the running updates.
  auto resum = [&] {
    value = frozen_value;
    error = frozen_error;
    for (const Panel& p : heap) {
      value += p.value;
      error += p.error;
    }
  };
  for (;;) {
    while (error > target() && !heap.empty()) {
      if (panels >= tol.max_iter) throw ConvergenceError("integrate_adaptive: panel budget exhausted", value, error);
      std::pop_heap(heap.begin(), heap.end());
      const Panel p = heap.back();
      heap.pop_back();
      const double mid = 0.5 * (p.a + p.b);
      if (!(mid > p.a && mid < p.b) ||
          std::fabs(p.b - p.a) < 1e3 * std::numeric_limits<double>::epsilon() * std::fabs(mid)) {
        frozen_value += p.value;
        frozen_error += p.error;
        continue;
      }
      const Panel left = gauss_kronrod(f, p.a, mid);
      const Panel right = gauss_kronrod(f, mid, p.b);
      if (!std::isfinite(left.value) || !std::isfinite(right.value))
        throw DomainError("integrate_adaptive: integrand is not finite");
      value += left.value + right.value - p.value;
      error += left.error + right.error - p.error;
      heap.push_back(left);
      std::push_heap(heap.begin(), heap.end());
      heap.push_back(right);
      std::push_heap(heap.begin(), heap.end());
      ++panels;
    }
    resum();
    if (error <= target()) break;
    if (heap.empty()) throw ConvergenceError("integrate_adaptive: tolerance not reached", value, error);
  }
  return {value, error, panels};
}

}  // namespace

QuadratureResult integrate_adaptive_ex(const Integrand& f, double a, double b, const Tolerance& tol, double scale) {
  tol.validate();
  if (!std::isfinite(a) || std::isnan(b)) throw DomainError("integrate_adaptive: lower limit must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("integrate_adaptive: scale must be finite and > 0");
  if (b == -kInf) throw DomainError("integrate_adaptive: upper limit must not be -inf");
  if (a == b) return {};
  if (b == kInf) {
    // t = a + scale * u / (1 - u), dt = scale / (1 - u)^2 du
    Integrand g = [&f, a, scale](double u) {
      const double w = 1.0 - u;
      const double jac = scale / (w * w);
      if (!std::isfinite(jac)) return 0.0;
      const double v = f(a + scale * u / w);
      return v == 0.0 ? 0.0 : v * jac;
    };
    return adaptive_finite(g, 0.0, 1.0, tol);
  }
  if (b < a) {
    QuadratureResult r = adaptive_finite(f, b, a, tol);
    r.value = -r.value;
    return r;
  }
  return adaptive_finite(f, a, b, tol);
}

double integrate_adaptive(const Integrand& f, double a, double b, const Tolerance& tol, double scale) {
  return integrate_adaptive_ex(f, a, b, tol, scale).value;
}

QuadratureResult integrate_pieces(const Integrand& f, std::span<const double> breaks, const Tolerance& tol,
                                  double tail_scale) {
  if (breaks.size() < 2) throw DomainError("integrate_pieces: need at least two break points");
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] >= breaks[i])) throw DomainError("integrate_pieces: break points must be ascending");
    try {
      const QuadratureResult r = integrate_adaptive_ex(f, breaks[i], breaks[i + 1], tol, tail_scale);
      total.value += r.value;
      total.error += r.error;
      total.panels += r.panels;
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(e.what(), total.value + e.estimate(), total.error + e.error_bound());
    }
  }
  return total;
}

}  // namespace kmu::specfun
