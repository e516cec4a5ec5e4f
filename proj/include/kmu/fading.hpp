#pragma once

// kappa-mu shadowed fading: density, distribution, sampling and presets.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kmu/specfun.hpp"

namespace kmu::fading {

using specfun::Tolerance;

struct Params {
  double kappa = 1.0;      // dominant-to-scattered power ratio, >= 0
  double mu = 1.0;         // clusters, > 0
  double m = 1.0;          // shadowing shape, > 0
  double gamma_bar = 1.0;  // mean SNR (linear), > 0

  void validate() const;
  Params with_gamma_bar(double g) const {
    Params p = *this;
    p.gamma_bar = g;
    return p;
  }
};

struct DerivedConstants {
  double log_lambda;  // lambda = exp(log_lambda), SNR^{-mu}
  double lambda;      // may underflow to 0 or overflow to inf; use log_lambda
  double nu;          // mu (1 + kappa) / gamma_bar
  double omega;       // mu^2 kappa (1 + kappa) / (gamma_bar (mu kappa + m)), < nu
};

/// Throws RangeError if log lambda is not finite.
DerivedConstants derived_constants(const Params& p);

/// log f(gamma). At gamma = 0: +inf for mu < 1, log lambda for mu = 1, -inf otherwise.
double log_pdf(const Params& p, double gamma, const Tolerance& tol = {});

/// (lambda / Gamma(mu)) gamma^{mu-1} e^{-nu gamma} 1F1(m; mu; omega gamma).
double pdf(const Params& p, double gamma, const Tolerance& tol = {});

/// int_0^upper f(gamma) h(gamma) dgamma for non-negative h. The range is cut
/// at geometric multiples of gamma_bar and h_scale (the length scale of h) and
/// at any extra break points; for mu < 1 the first piece uses gamma = u^{1/mu}.
specfun::QuadratureResult expectation(const Params& p, const std::function<double(double)>& h,
                                      const Tolerance& tol = {}, double h_scale = 1.0,
                                      double upper = specfun::kInf,
                                      std::span<const double> extra_breaks = {});

/// int_0^gamma f.
double cdf_numeric(const Params& p, double gamma, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Sampling

enum class Sampler { Physical, InverseCdf };

Sampler parse_sampler(std::string_view name);
std::string to_string(Sampler s);

struct McControl {
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 1;
  int streams = 1;
  bool parallel = true;  // run streams on separate threads

  void validate() const;
};

/// Tabulated CDF on a geometric-then-linear grid, inverted by linear
/// interpolation.
class InverseCdfTable {
 public:
  explicit InverseCdfTable(const Params& p, const Tolerance& tol = Tolerance{}.with_rel(1e-11));
  double quantile(double u) const;
  std::span<const double> nodes() const { return x_; }
  std::span<const double> cdf() const { return F_; }

 private:
  std::vector<double> x_;
  std::vector<double> F_;
};

/// n_samples SNR draws. Stream s receives a contiguous block and its own
/// generator seeded from (seed, s); blocks are concatenated in stream order,
/// so the output does not depend on threading. Physical requires integer mu.
std::vector<double> sample(const Params& p, const McControl& mc, Sampler sampler = Sampler::InverseCdf);

/// Seed of stream s derived from the master seed (SplitMix64 mixing).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Writes little-endian float64 samples to path and a JSON sidecar to path + ".json".
void write_sample_dump(const std::string& path, std::span<const double> samples, const Params& p,
                       const McControl& mc, Sampler sampler);

// ---------------------------------------------------------------------------
// Presets

inline constexpr double kLargeShadowing = 5e4;

enum class Preset { Rayleigh, Rician, Nakagami, NakagamiKappaZero, RicianShadowed, OneSidedGaussian };

Preset parse_preset(std::string_view name);

/// shape1: K for Rician / RicianShadowed, m-hat for the Nakagami presets.
/// shape2: shadowing m for RicianShadowed.
Params preset(Preset which, double gamma_bar, double shape1 = 1.0, double shape2 = 1.0);

}  // namespace kmu::fading
