#include <cmath>
#include <vector>

#include "kmu/aep.hpp"

namespace kmu::aep {

std::vector<DiversityPoint> diversity_order(const Params& p, const ModulationSpec& scheme,
                                            std::span<const double> gamma_bar_grid, const ChiSelection& chi) {
  if (gamma_bar_grid.size() < 2) throw DomainError("diversity_order: grid needs at least two points");
  for (std::size_t i = 0; i < gamma_bar_grid.size(); ++i) {
    if (!(gamma_bar_grid[i] > 0.0) || !std::isfinite(gamma_bar_grid[i]))
      throw DomainError("diversity_order: grid values must be finite and > 0");
    if (i > 0 && !(gamma_bar_grid[i] > gamma_bar_grid[i - 1]))
      throw DomainError("diversity_order: grid must be ascending");
  }
  constexpr double h = 1e-3;  // step in log gamma_bar for the local slope
  SeriesControl ctrl;
  std::vector<DiversityPoint> out;
  for (double g : gamma_bar_grid) {
    auto log_p = [&](double gb) { return log_aep_closed(p.with_gamma_bar(gb), scheme, ctrl, chi); };
    const double lp = log_p(g);
    const double lg = std::log(g);
    const double ratio = lg == 0.0 ? std::nan("") : -lp / lg;
    const double slope = -(log_p(g * std::exp(h)) - log_p(g * std::exp(-h))) / (2.0 * h);
    out.push_back({g, lp, ratio, slope});
  }
  return out;
}

}  // namespace kmu::aep
