// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kmu/aep.hpp"
#include "ks.hpp"
#include "oracles.hpp"

using namespace kmu;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  const char* name;
  double time_limit;  // seconds; 0 for none
  std::function<Outcome()> run;
};

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
double db(double x) { return std::pow(10.0, x / 10.0); }

awgn::ModulationSpec mpsk(int M) { return awgn::ModulationSpec::parse("mpsk:" + std::to_string(M)); }
const awgn::ModulationSpec kDqpsk = awgn::ModulationSpec::gc_dqpsk();

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome table2() {
  struct Cell {
    int M;
    double gamma, exact, approx;
  };
  const std::vector<Cell> cells = {
      {4, 1, 1.508e-1, 1.501e-1},   {4, 2, 4.494e-2, 4.460e-2},   {4, 3, 1.425e-2, 1.414e-2},
      {4, 4, 4.672e-3, 4.642e-3},   {4, 5, 1.565e-3, 1.556e-3},   {4, 6, 5.319e-4, 5.289e-4},
      {4, 7, 1.828e-4, 1.816e-4},   {8, 2, 1.849e-1, 1.847e-1},   {8, 4, 6.083e-2, 6.077e-2},
      {8, 6, 2.167e-2, 2.156e-2},   {8, 8, 8.018e-3, 7.976e-3},   {8, 10, 3.034e-3, 3.022e-3},
      {8, 14, 4.526e-4, 4.504e-4},  {8, 16, 1.772e-4, 1.760e-4},  {16, 5, 2.173e-1, 2.177e-1},
      {16, 10, 8.100e-2, 8.072e-2}, {16, 20, 1.360e-2, 1.358e-2}, {16, 30, 2.508e-3, 2.500e-3},
      {16, 35, 1.096e-3, 1.091e-3}, {16, 40, 4.832e-4, 4.794e-4}, {16, 45, 2.143e-4, 2.122e-4},
  };
  int bad = 0;
  double worst = 0.0;
  std::ostringstream miss;
  for (const Cell& c : cells) {
    const double e = rel(awgn::mpsk_sep_exact(c.M, c.gamma), c.exact);
    const double a = rel(awgn::mpsk_sep_approx(c.M, c.gamma), c.approx);
    worst = std::max({worst, e, a});
    if (e > 1e-3) miss << " M=" << c.M << ",g=" << c.gamma << ",exact:" << fmt("%.2e", e);
    if (a > 1e-3) miss << " M=" << c.M << ",g=" << c.gamma << ",approx:" << fmt("%.2e", a);
    bad += (e > 1e-3) + (a > 1e-3);
  }
  return {bad == 0, std::to_string(cells.size()) + " cells, worst rel " + fmt("%.2e", worst) +
                        (bad ? ", misses:" + miss.str() : "")};
}

Outcome table4() {
  struct Row {
    double gamma, exact, approx;
  };
  const std::vector<Row> rows = {
      {0.5, 2.6929e-1, 2.6918e-1}, {1, 1.6391e-1, 1.6395e-1},   {1.5, 1.0646e-1, 1.0645e-1},
      {2, 7.1611e-2, 7.1614e-2},   {2.5, 4.9177e-2, 4.9178e-2}, {3, 3.4227e-2, 3.4226e-2},
      {4, 1.7013e-2, 1.7013e-2},   {5, 8.6484e-3, 8.6485e-3},   {6, 4.4613e-3, 4.4613e-3},
      {7, 2.3256e-3, 2.3256e-3},   {8, 1.2219e-3, 1.2219e-3},   {9, 6.4596e-4, 6.4597e-4},
      {10, 3.4318e-4, 3.4319e-4},  {11, 1.8307e-4, 1.8307e-4},  {12, 9.7990e-5, 9.7990e-5},
  };
  double worst = 0.0;
  for (const Row& r : rows)
    worst = std::max({worst, rel(awgn::dqpsk_bep_exact(r.gamma), r.exact),
                      rel(awgn::dqpsk_bep_approx(r.gamma), r.approx)});
  return {worst <= 1e-3, std::to_string(rows.size()) + " rows, worst rel " + fmt("%.2e", worst)};
}

Outcome bounds() {
  int bad = 0;
  for (int i = 0; i < 200; ++i) {
    const double g = 1e-3 * std::pow(3e4, i / 199.0);
    const double h = awgn::dqpsk_bep_exact(g);
    if (!(awgn::dqpsk_bep_lower(g) <= h && h <= awgn::dqpsk_bep_upper(g))) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " violations on 200 points"};
}

Outcome marcum() {
  double worst = 0.0, edge = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double a = 5.0 * i / 19.0, b = 5.0 * j / 19.0;
      const double ref = oracle::marcum_q1_integral(a, b);
      if (ref > 1e-300) worst = std::max(worst, rel(specfun::marcum_q1(a, b), ref));
    }
    const double t = 5.0 * i / 19.0;
    edge = std::max({edge, std::fabs(specfun::marcum_q1(t, 0.0) - 1.0),
                     rel(specfun::marcum_q1(0.0, t), std::exp(-0.5 * t * t))});
  }
  return {worst <= 1e-9 && edge <= 1e-12,
          "grid worst rel " + fmt("%.2e", worst) + ", boundary worst " + fmt("%.2e", edge)};
}

std::vector<fading::Params> random_tuples() {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> k(0.0, 10.0), mu(0.5, 4.0), m(0.5, 10.0), gb(0.5, 50.0);
  std::vector<fading::Params> out;
  for (int i = 0; i < 10; ++i) out.push_back({k(gen), mu(gen), m(gen), gb(gen)});
  return out;
}

Outcome pdf_moments() {
  double mass_err = 0.0, mean_err = 0.0;
  for (const fading::Params& p : random_tuples()) {
    mass_err = std::max(mass_err,
                        std::fabs(fading::expectation(p, [](double) { return 1.0; }, {}, p.gamma_bar).value - 1.0));
    mean_err = std::max(mean_err,
                        rel(fading::expectation(p, [](double g) { return g; }, {}, p.gamma_bar).value, p.gamma_bar));
  }
  return {mass_err <= 1e-8 && mean_err <= 1e-6,
          "10 tuples, |mass-1| " + fmt("%.2e", mass_err) + ", mean rel " + fmt("%.2e", mean_err)};
}

Outcome sampler() {
  const std::uint64_t n = 100000;
  const double crit = 1.63 / std::sqrt(static_cast<double>(n));
  const double crit2 = 1.628 * std::sqrt(2.0 / static_cast<double>(n));
  const fading::Params tuples[] = {{0.0, 1.0, 5e4, 2.0}, {5.0, 2.3, 4.7, 10.0}, {1.0, 0.6, 1.5, 1.0}, {8.0, 3.0, 0.8, 30.0}};
  bool ok = true;
  double worst = 0.0, worst2 = 0.0;
  std::uint64_t seed = 11;
  for (const fading::Params& p : tuples) {
    const std::vector<double> inv = fading::sample(p, {n, seed++, 4, true}, fading::Sampler::InverseCdf);
    const double d = ks::distance_bound(inv, p);
    worst = std::max(worst, d);
    ok = ok && d <= crit;
    if (p.mu == std::floor(p.mu)) {
      const std::vector<double> phys = fading::sample(p, {n, seed++, 4, true}, fading::Sampler::Physical);
      const double d2 = oracle::ks_two_sample(phys, inv);
      worst2 = std::max(worst2, d2);
      ok = ok && d2 <= crit2;
    }
  }
  return {ok, "KS " + fmt("%.4f", worst) + " <= " + fmt("%.4f", crit) + ", two-sample " + fmt("%.4f", worst2) +
                  " <= " + fmt("%.4f", crit2)};
}

const std::vector<fading::Params> kPanel = {
    {1.0, 2.0, 1.3, 10.0}, {0.0, 1.0, 1.0, 10.0}, {1.0, 1.5, 1.3, 3.0},
    {10.0, 2.3, 4.7, 30.0}, {5.0, 0.7, 2.0, 5.0}, {3.0, 3.0, 0.8, 100.0},
};

Outcome triangle() {
  double asep = 0.0, abep = 0.0, z = 0.0;
  std::uint64_t seed = 500;
  for (const fading::Params& p : kPanel) {
    for (int M : {2, 4, 8, 16})
      asep = std::max(asep, rel(aep::asep_mpsk_closed(p, M), aep::aep_quadrature_oracle(p, mpsk(M), aep::EpKind::Approx)));
    abep = std::max(abep, rel(aep::abep_dqpsk_closed(p, {60, 1e-300, false}).value,
                              aep::aep_quadrature_oracle(p, kDqpsk, aep::EpKind::Approx)));
    for (const awgn::ModulationSpec& s : {mpsk(4), kDqpsk}) {
      const aep::McEstimate mc = aep::aep_monte_carlo(p, s, aep::EpKind::Approx, {1000000, seed++, 4, true});
      z = std::max(z, std::fabs(mc.mean - aep::aep_quadrature_oracle(p, s, aep::EpKind::Approx)) / mc.std_error);
    }
  }
  return {asep <= 1e-8 && abep <= 1e-3 && z <= 3.0, "ASEP rel " + fmt("%.2e", asep) + ", ABEP(L=60) rel " +
                                                         fmt("%.2e", abep) + ", MC max |z| " + fmt("%.2f", z)};
}

Outcome end_to_end() {
  double m_worst = 0.0, d_worst = 0.0;
  for (double gdb = 0.0; gdb <= 25.0; gdb += 2.5) {
    for (double mu : {1.0, 1.5, 2.0, 3.0}) {
      const fading::Params p{1.0, mu, 1.3, db(gdb)};
      for (int M : {2, 4, 8, 16})
        m_worst = std::max(m_worst, rel(aep::asep_mpsk_closed(p, M),
                                        aep::aep_quadrature_oracle(p, mpsk(M), aep::EpKind::Exact)));
    }
    for (const fading::Params& p : {fading::Params{1.0, 1.5, 1.3, db(gdb)}, fading::Params{10.0, 2.3, 4.7, db(gdb)}})
      d_worst = std::max(d_worst, rel(aep::abep_dqpsk_closed(p).value,
                                      aep::aep_quadrature_oracle(p, kDqpsk, aep::EpKind::Exact)));
  }
  return {m_worst <= 0.02 && d_worst <= 0.05,
          "M-PSK worst rel " + fmt("%.4f", m_worst) + ", DQPSK worst rel " + fmt("%.4f", d_worst)};
}

Outcome diversity() {
  const std::vector<double> grid{db(55.0), db(60.0)};
  double worst = 0.0, slope = 0.0, spread = 0.0;
  for (double mu : {1.0, 2.0, 3.0}) {
    const fading::Params p{5.0, mu, 4.7, 1.0};
    const aep::DiversityPoint a = aep::diversity_order(p, mpsk(4), grid).back();
    const aep::DiversityPoint b = aep::diversity_order(p, kDqpsk, grid).back();
    worst = std::max({worst, std::fabs(a.ratio - mu), std::fabs(b.ratio - mu)});
    slope = std::max({slope, std::fabs(a.local_slope - mu), std::fabs(b.local_slope - mu)});
    spread = std::max(spread, std::fabs(a.ratio - b.ratio));
  }
  return {worst <= 0.05, "max |ratio - mu| " + fmt("%.3f", worst) + " (scheme spread " + fmt("%.3f", spread) +
                             "; local slope max |d - mu| " + fmt("%.2e", slope) + ")"};
}

Outcome truncation() {
  int invalid = 0, not_decreasing = 0;
  for (double kappa : {1.0, 5.0}) {
    double prev_gb[4] = {specfun::kInf, specfun::kInf, specfun::kInf, specfun::kInf};
    for (double gdb : {5.0, 10.0, 15.0}) {
      const fading::Params p{kappa, 2.3, 4.7, db(gdb)};
      const double ref = aep::abep_dqpsk_closed(p, {60, 1e-300, false}).value;
      double prev = specfun::kInf;
      int slot = 0;
      for (int L = 1; L <= 10; ++L) {
        const double b = aep::truncation_bound(p, L);
        if (!(b < prev)) ++not_decreasing;
        prev = b;
        if (L == 1 || L == 2 || L == 5 || L == 10) {
          if (b < std::fabs(ref - aep::abep_dqpsk_closed(p, {L, 1e-300, false}).value)) ++invalid;
          if (!(b < prev_gb[slot])) ++not_decreasing;
          prev_gb[slot++] = b;
        }
      }
    }
  }
  return {invalid == 0 && not_decreasing == 0,
          std::to_string(invalid) + " invalid bounds, " + std::to_string(not_decreasing) + " monotonicity breaks"};
}

Outcome rayleigh() {
  double worst = 0.0;
  for (double gb : {1.0, 10.0, 100.0}) {
    const fading::Params p{0.0, 1.0, 5e4, gb};
    worst = std::max(worst, rel(aep::aep_quadrature_oracle(p, mpsk(2), aep::EpKind::Exact), oracle::rayleigh_bpsk(gb)));
  }
  return {worst <= 1e-4, "worst rel " + fmt("%.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"Table II reproduction", 1.0, table2},
      {"Table IV reproduction", 1.0, table4},
      {"DQPSK bound ordering", 0.0, bounds},
      {"Marcum Q1 correctness", 0.0, marcum},
      {"kappa-mu shadowed pdf moments", 10.0, pdf_moments},
      {"sampler fidelity", 0.0, sampler},
      {"AEP oracle triangle", 120.0, triangle},
      {"end-to-end accuracy vs exact EP", 0.0, end_to_end},
      {"diversity order at 60 dB", 0.0, diversity},
      {"truncation bound validity", 0.0, truncation},
      {"Rayleigh BPSK sanity", 0.0, rayleigh},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += ", over the " + fmt("%g", c.time_limit) + " s limit";
    }
    failed += !o.pass;
    std::printf("%s #%zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
