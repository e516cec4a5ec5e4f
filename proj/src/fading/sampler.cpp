#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <thread>

#include "kmu/fading.hpp"

namespace kmu::fading {

Sampler parse_sampler(std::string_view name) {
  if (name == "physical") return Sampler::Physical;
  if (name == "inverse-cdf" || name == "inverse_cdf") return Sampler::InverseCdf;
  throw DomainError("unknown sampler '" + std::string(name) + "' (expected physical or inverse-cdf)");
}

std::string to_string(Sampler s) { return s == Sampler::Physical ? "physical" : "inverse-cdf"; }

void McControl::validate() const {
  if (n_samples < 1) throw DomainError("McControl: n_samples must be >= 1");
  if (streams < 1) throw DomainError("McControl: streams must be >= 1");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ mix(stream + 0x632BE59BD9B4E019ULL));
}

InverseCdfTable::InverseCdfTable(const Params& p, const Tolerance& tol) {
  p.validate();
  const double gb = p.gamma_bar;
  x_.push_back(0.0);
  F_.push_back(0.0);

  // The first cell may hold a mu < 1 singularity; expectation() handles it.
  const double first = 1e-8 * gb;
  double acc = cdf_numeric(p, first, tol);
  x_.push_back(first);
  F_.push_back(acc);

  auto pdf_fn = [&](double g) { return pdf(p, g, tol); };
  auto add_cell = [&](double next) {
    acc += specfun::integrate_adaptive(pdf_fn, x_.back(), next, tol);
    x_.push_back(next);
    F_.push_back(acc);
  };

  constexpr int kGeometric = 400;
  const double ratio = std::pow(1e8, 1.0 / kGeometric);
  for (int i = 1; i <= kGeometric; ++i) add_cell(first * std::pow(ratio, i));
  x_.back() = gb;
  for (int i = 1; i <= 900; ++i) add_cell(gb * (1.0 + i / 100.0));
  while (x_.back() < 1e4 * gb) {
    const double before = acc;
    add_cell(x_.back() * 1.01);
    if (acc - before <= 1e-16 * acc && acc > 0.5) break;
  }
  const double tail = specfun::integrate_adaptive(pdf_fn, x_.back(), specfun::kInf, tol, gb);
  const double total = acc + tail;
  if (!(total > 0.0)) throw ConvergenceError("InverseCdfTable: CDF did not accumulate", total, 1.0);
  for (double& f : F_) f /= total;
}

double InverseCdfTable::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in [0, 1]");
  const auto it = std::upper_bound(F_.begin(), F_.end(), u);
  if (it == F_.end()) return x_.back();
  const std::size_t j = static_cast<std::size_t>(it - F_.begin());
  if (j == 0) return x_.front();
  const double f0 = F_[j - 1], f1 = F_[j];
  const double t = f1 > f0 ? (u - f0) / (f1 - f0) : 0.0;
  return x_[j - 1] + t * (x_[j] - x_[j - 1]);
}

namespace {

void physical_block(const Params& p, std::uint64_t seed, std::size_t n, double* out) {
  std::mt19937_64 gen(seed);
  std::gamma_distribution<double> shadow(p.m, 1.0 / p.m);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const int clusters = static_cast<int>(p.mu);
  const double dominant = std::sqrt(0.5 * p.kappa);  // p_i = q_i, sum p_i^2 + q_i^2 = kappa mu
  const double scale = p.gamma_bar / (p.mu * (1.0 + p.kappa));
  for (std::size_t k = 0; k < n; ++k) {
    const double rs = std::sqrt(shadow(gen));
    double w = 0.0;
    for (int i = 0; i < clusters; ++i) {
      const double x = normal(gen) + rs * dominant;
      const double y = normal(gen) + rs * dominant;
      w += x * x + y * y;
    }
    out[k] = scale * w;
  }
}

void inverse_block(const InverseCdfTable& table, std::uint64_t seed, std::size_t n, double* out) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) out[k] = table.quantile(unif(gen));
}

}  // namespace

std::vector<double> sample(const Params& p, const McControl& mc, Sampler sampler) {
  p.validate();
  mc.validate();
  if (sampler == Sampler::Physical && (p.mu != std::floor(p.mu) || p.mu > 1e6))
    throw DomainError("physical sampler requires integer mu");

  std::optional<InverseCdfTable> table;
  if (sampler == Sampler::InverseCdf) table.emplace(p);

  const std::size_t n = mc.n_samples;
  const std::size_t streams = static_cast<std::size_t>(mc.streams);
  std::vector<double> out(n);
  std::vector<std::size_t> offset(streams + 1, 0);
  for (std::size_t s = 0; s < streams; ++s) offset[s + 1] = offset[s] + n / streams + (s < n % streams ? 1 : 0);

  auto run = [&](std::size_t s) {
    const std::uint64_t seed = stream_seed(mc.seed, s);
    const std::size_t len = offset[s + 1] - offset[s];
    if (sampler == Sampler::Physical)
      physical_block(p, seed, len, out.data() + offset[s]);
    else
      inverse_block(*table, seed, len, out.data() + offset[s]);
  };

  if (mc.parallel && streams > 1) {
    std::vector<std::thread> workers;
    for (std::size_t s = 0; s < streams; ++s) workers.emplace_back(run, s);
    for (std::thread& w : workers) w.join();
  } else {
    for (std::size_t s = 0; s < streams; ++s) run(s);
  }
  return out;
}

}  // namespace kmu::fading
