#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "kmu/aep.hpp"

namespace kmu::aep {

EpKind parse_ep_kind(std::string_view name) {
  if (name == "exact") return EpKind::Exact;
  if (name == "approx") return EpKind::Approx;
  throw DomainError("unknown EP kind '" + std::string(name) + "' (expected exact or approx)");
}

namespace {

// Conditional EP as a callable, plus the discontinuities it may have.
struct Conditional {
  std::function<double(double)> h;
  std::vector<double> breaks;
};

Conditional conditional_ep(const Params& p, const ModulationSpec& scheme, EpKind which, const ChiSelection& chi) {
  scheme.validate();
  const Tolerance inner{1e-12, 1e-300, 10000};
  if (which == EpKind::Exact) return {[scheme, inner](double g) { return awgn::ep_exact(scheme, g, inner); }, {}};
  if (scheme.is_mpsk()) {
    const awgn::MpskCoefficients c = awgn::mpsk_coefficients(scheme.order);
    return {[c](double g) { return awgn::mpsk_sep_approx(c, g); }, {}};
  }
  if (chi.policy == ChiRangePolicy::Piecewise) {
    Conditional out{[table = chi.table](double g) { return awgn::dqpsk_bep_approx(g, table); }, {}};
    for (const awgn::ChiFitRow& r : chi.table.rows)
      if (r.lo > 0.0) out.breaks.push_back(r.lo);
    return out;
  }
  const awgn::ChiFitRow row = chi.resolve(p.gamma_bar);
  return {[row](double g) { return awgn::dqpsk_bep_approx(g, row); }, {}};
}

}  // namespace

double aep_quadrature_oracle(const Params& p, const ModulationSpec& scheme, EpKind which, const Tolerance& tol,
                             const ChiSelection& chi) {
  p.validate();
  const Conditional c = conditional_ep(p, scheme, which, chi);
  const double scale = 1.0 / awgn::ep_decay_rate(scheme);
  return fading::expectation(p, c.h, tol, scale, specfun::kInf, c.breaks).value;
}

McEstimate aep_monte_carlo(const Params& p, const ModulationSpec& scheme, EpKind which, const fading::McControl& mc,
                           fading::Sampler sampler, const ChiSelection& chi) {
  const Conditional c = conditional_ep(p, scheme, which, chi);
  std::vector<double> values = fading::sample(p, mc, sampler);
  // Conditional EPs in place, split across threads; the reduction below stays serial.
  const std::size_t workers = mc.parallel ? static_cast<std::size_t>(mc.streams) : 1;
  const std::size_t chunk = (values.size() + workers - 1) / workers;
  auto eval = [&](std::size_t w) {
    const std::size_t end = std::min(values.size(), (w + 1) * chunk);
    for (std::size_t i = w * chunk; i < end; ++i) values[i] = c.h(values[i]);
  };
  if (workers == 1) {
    eval(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          eval(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }
  // Welford running mean and variance.
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t n = 0;
  for (double v : values) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

}  // namespace kmu::aep
