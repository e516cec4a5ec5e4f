#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "kmu/awgn.hpp"

namespace kmu::awgn {

namespace {

using Params = std::array<double, 4>;  // c0, d0, c1, d1

struct Trial {
  Params p{};
  double sse = specfun::kInf;
  int iterations = 0;
};

double model(const Params& p, int n_params, double x) {
  double v = p[0] * std::exp(-p[1] * x);
  if (n_params == 4) v += p[2] * std::exp(-p[3] * x);
  return v;
}

double sse_of(const Params& p, int n_params, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = model(p, n_params, x[i]) - y[i];
    s += r * r;
  }
  return s;
}

// Solves A d = b in place (n <= 4) by Gaussian elimination with partial pivoting.
bool solve(std::array<std::array<double, 4>, 4> A, std::array<double, 4> b, int n, std::array<double, 4>& d) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (!(std::fabs(A[piv][col]) > 0.0)) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r][c] * d[c];
    d[r] = s / A[r][r];
  }
  return true;
}

// Levenberg-Marquardt with Marquardt diagonal scaling; parameters are
// projected onto c, d >= 0 after every step.
Trial levenberg_marquardt(Params p, int n_params, std::span<const double> x, std::span<const double> y) {
  Trial t{p, sse_of(p, n_params, x, y), 0};
  double lambda = 1e-3;
  for (int it = 0; it < 500; ++it) {
    t.iterations = it + 1;
    std::array<std::array<double, 4>, 4> H{};
    std::array<double, 4> g{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::array<double, 4> J{};
      const double e0 = std::exp(-t.p[1] * x[i]);
      J[0] = e0;
      J[1] = -t.p[0] * x[i] * e0;
      double r = t.p[0] * e0 - y[i];
      if (n_params == 4) {
        const double e1 = std::exp(-t.p[3] * x[i]);
        J[2] = e1;
        J[3] = -t.p[2] * x[i] * e1;
        r += t.p[2] * e1;
      }
      for (int a = 0; a < n_params; ++a) {
        g[a] += J[a] * r;
        for (int b = 0; b < n_params; ++b) H[a][b] += J[a] * J[b];
      }
    }

    bool improved = false;
    while (lambda < 1e16) {
      auto A = H;
      std::array<double, 4> rhs{};
      for (int a = 0; a < n_params; ++a) {
        A[a][a] += lambda * std::max(H[a][a], 1e-30);
        rhs[a] = -g[a];
      }
      std::array<double, 4> d{};
      if (solve(A, rhs, n_params, d)) {
        Params q = t.p;
        for (int a = 0; a < n_params; ++a) q[a] = std::max(0.0, q[a] + d[a]);
        const double s = sse_of(q, n_params, x, y);
        if (std::isfinite(s) && s < t.sse) {
          const double gain = t.sse - s;
          double step = 0.0, size = 0.0;
          for (int a = 0; a < n_params; ++a) {
            step = std::max(step, std::fabs(q[a] - t.p[a]));
            size = std::max(size, std::fabs(q[a]));
          }
          t.p = q;
          t.sse = s;
          lambda = std::max(lambda / 3.0, 1e-12);
          improved = true;
          if (gain <= 1e-15 * s || step <= 1e-13 * std::max(size, 1e-300)) return t;
          break;
        }
      }
      lambda *= 4.0;
    }
    if (!improved) return t;
  }
  return t;
}

// Best non-negative amplitudes for fixed rates: 2x2 normal equations, falling
// back to a single term when either amplitude would be negative.
Params amplitudes_for(double d0, double d1, std::span<const double> x, std::span<const double> y) {
  double s00 = 0, s01 = 0, s11 = 0, b0 = 0, b1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e0 = std::exp(-d0 * x[i]);
    const double e1 = std::exp(-d1 * x[i]);
    s00 += e0 * e0;
    s01 += e0 * e1;
    s11 += e1 * e1;
    b0 += e0 * y[i];
    b1 += e1 * y[i];
  }
  const double det = s00 * s11 - s01 * s01;
  if (std::fabs(det) > 1e-14 * s00 * s11) {
    const double c0 = (b0 * s11 - b1 * s01) / det;
    const double c1 = (b1 * s00 - b0 * s01) / det;
    if (c0 >= 0.0 && c1 >= 0.0) return {c0, d0, c1, d1};
  }
  const double only0 = std::max(0.0, b0 / s00);
  const double only1 = std::max(0.0, b1 / s11);
  const Params p0{only0, d0, 0.0, d1};
  const Params p1{0.0, d0, only1, d1};
  return sse_of(p0, 4, x, y) <= sse_of(p1, 4, x, y) ? p0 : p1;
}

TwoExpFit canonical(const Trial& t, int n_params, std::size_t n) {
  Params p = t.p;
  if (n_params == 2) p[2] = p[3] = 0.0;
  const double dmax = std::max(p[1], p[3]);
  if (p[2] > 0.0 && p[0] > 0.0 && std::fabs(p[1] - p[3]) <= 1e-9 * std::max(dmax, 1e-300)) {
    p[0] += p[2];
    p[2] = 0.0;
  }
  if (p[0] == 0.0 && p[2] > 0.0) {
    std::swap(p[0], p[2]);
    std::swap(p[1], p[3]);
  }
  if (p[0] > 0.0 && p[2] > 0.0 && p[1] < p[3]) {
    std::swap(p[0], p[2]);
    std::swap(p[1], p[3]);
  }
  if (p[2] == 0.0) p[3] = 0.0;
  return {p[0], p[1], p[2], p[3], std::sqrt(t.sse / static_cast<double>(n)), t.iterations};
}

}  // namespace

TwoExpFit fit_two_exponentials(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("fit_two_exponentials: x and y differ in length");
  if (x.size() < 4) throw DomainError("fit_two_exponentials: need at least 4 points");
  double ymax = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DomainError("fit_two_exponentials: non-finite data");
    ymax = std::max(ymax, std::fabs(y[i]));
  }

  static constexpr std::array<double, 11> kRates = {0.0,  1e-5, 1e-4, 1e-3, 1e-2, 3e-2,
                                                    0.1,  0.3,  1.0,  3.0,  10.0};

  Trial best1;
  for (double d : kRates) {
    const Params start = amplitudes_for(d, d, x, y);
    Params p{start[0] + start[2], d, 0.0, 0.0};
    const Trial t = levenberg_marquardt(p, 2, x, y);
    if (t.sse < best1.sse) best1 = t;
  }

  Trial best2;
  for (std::size_t i = 0; i < kRates.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Trial t = levenberg_marquardt(amplitudes_for(kRates[i], kRates[j], x, y), 4, x, y);
      if (t.sse < best2.sse) best2 = t;
    }
  }

  if (!std::isfinite(best1.sse) && !std::isfinite(best2.sse)) {
    std::ostringstream diag;
    diag << "{\"points\":" << x.size() << ",\"sse_single\":\"inf\",\"sse_double\":\"inf\"}";
    throw FitError("fit_two_exponentials: optimizer diverged", diag.str());
  }
  const double noise_floor = 1e-24 * static_cast<double>(x.size()) * ymax * ymax;
  if (best1.sse <= best2.sse + noise_floor) return canonical(best1, 2, x.size());
  return canonical(best2, 4, x.size());
}

double fit_rms(const ChiFitRow& row, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw DomainError("fit_rms: x and y must be non-empty and equal length");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = row(x[i]) - y[i];
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(x.size()));
}

ChiRefit refit_chi(std::span<const double> gamma_grid, std::span<const double> range_edges) {
  if (range_edges.size() < 2) throw DomainError("refit_chi: need at least two range edges");
  for (std::size_t i = 0; i + 1 < range_edges.size(); ++i)
    if (!(range_edges[i] < range_edges[i + 1])) throw DomainError("refit_chi: range edges must be ascending");

  ChiRefit out;
  for (std::size_t r = 0; r + 1 < range_edges.size(); ++r) {
    const double lo = range_edges[r];
    const double hi = range_edges[r + 1];
    std::vector<double> xs, ys;
    for (double g : gamma_grid) {
      if (g >= lo && g < hi) {
        xs.push_back(g);
        ys.push_back(chi_exact(g));
      }
    }
    if (xs.size() < 20)
      throw DomainError("refit_chi: range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        ") has fewer than 20 grid points");
    const TwoExpFit f = fit_two_exponentials(xs, ys);
    if (!std::isfinite(f.rms)) {
      std::ostringstream diag;
      diag << "{\"range\":[" << lo << "," << hi << "],\"rms\":\"nan\"}";
      throw FitError("refit_chi: fit produced a non-finite residual", diag.str());
    }
    out.table.rows.push_back({lo, hi, f.c0, f.d0, f.c1, f.d1});
    out.rms.push_back(f.rms);
  }
  return out;
}

}  // namespace kmu::awgn
