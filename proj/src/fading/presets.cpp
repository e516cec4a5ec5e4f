#include <string>

#include "kmu/fading.hpp"

namespace kmu::fading {

Preset parse_preset(std::string_view name) {
  if (name == "rayleigh") return Preset::Rayleigh;
  if (name == "rician") return Preset::Rician;
  if (name == "nakagami") return Preset::Nakagami;
  if (name == "nakagami-kappa-zero") return Preset::NakagamiKappaZero;
  if (name == "rician-shadowed") return Preset::RicianShadowed;
  if (name == "one-sided-gaussian") return Preset::OneSidedGaussian;
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

Params preset(Preset which, double gamma_bar, double shape1, double shape2) {
  Params p{0.0, 1.0, kLargeShadowing, gamma_bar};
  switch (which) {
    case Preset::Rayleigh:
      break;
    case Preset::Rician:
      p.kappa = shape1;
      break;
    case Preset::Nakagami:
      p.mu = shape1;
      break;
    case Preset::NakagamiKappaZero:
      p.mu = shape1;
      p.m = shape1;
      break;
    case Preset::RicianShadowed:
      p.kappa = shape1;
      p.m = shape2;
      break;
    case Preset::OneSidedGaussian:
      p.mu = 0.5;
      break;
    default:
      throw DomainError("unknown preset");
  }
  p.validate();
  return p;
}

}  // namespace kmu::fading
