#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kmu/cli.hpp"

namespace kmu::cli {

using nlohmann::json;

Grid Grid::parse(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw DomainError("grid: cannot parse '" + text + "' (expected start:stop:step)");
    }
    if (used != item.size()) throw DomainError("grid: cannot parse '" + text + "' (expected start:stop:step)");
    parts.push_back(v);
  }
  Grid g;
  if (parts.size() == 1) {
    g = {parts[0], parts[0], 1.0};
  } else if (parts.size() == 3) {
    g = {parts[0], parts[1], parts[2]};
  } else {
    throw DomainError("grid: expected start:stop:step, got '" + text + "'");
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop) || !(g.step > 0.0) || !std::isfinite(g.step))
    throw DomainError("grid: values must be finite and step > 0");
  if (g.stop < g.start) throw DomainError("grid: stop must be >= start");
  return g;
}

std::vector<double> Grid::values() const {
  std::vector<double> out;
  const double n = std::floor((stop - start) / step + 1e-9);
  if (n > 1e6) throw DomainError("grid: more than a million points");
  for (long i = 0; i <= static_cast<long>(n); ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

void RunConfig::validate() const {
  const auto& names = command_names();
  if (!command.empty() && std::find(names.begin(), names.end(), command) == names.end())
    throw DomainError("unknown command '" + command + "'");
  if (format != "csv" && format != "json") throw DomainError("format must be csv or json");
  awgn::ModulationSpec::parse(scheme);
  params.validate();
  series.validate();
  quad.validate();
  if (mc.n_samples > 0) mc.validate();  // 0 disables Monte Carlo columns
  if (l_max < 1) throw DomainError("l_max must be >= 1");
  fading::parse_sampler(sampler);
  aep::parse_chi_policy(chi_policy);
  aep::parse_lambda_variant(variant);
  if (!preset.empty()) fading::parse_preset(preset);
}

namespace {

template <class T>
void take(const json& obj, const char* key, T& dst) {
  if (obj.contains(key)) dst = obj.at(key).get<T>();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw DomainError("config: '" + where + "' must be an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; }))
      throw DomainError("config: unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

RunConfig config_from_json(const std::string& text, RunConfig cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    check_keys(j,
               {"command", "scheme", "params", "linear", "grid", "series", "quad", "mc", "sampler", "chi_policy",
                "variant", "preset", "alpha", "beta", "l_max", "dump", "output", "format"},
               "config");
    take(j, "command", cfg.command);
    take(j, "scheme", cfg.scheme);
    take(j, "linear", cfg.linear);
    take(j, "sampler", cfg.sampler);
    take(j, "chi_policy", cfg.chi_policy);
    take(j, "variant", cfg.variant);
    take(j, "preset", cfg.preset);
    take(j, "alpha", cfg.alpha);
    take(j, "beta", cfg.beta);
    take(j, "l_max", cfg.l_max);
    take(j, "dump", cfg.dump);
    take(j, "output", cfg.output);
    take(j, "format", cfg.format);
    if (j.contains("params")) {
      const json& p = j.at("params");
      check_keys(p, {"kappa", "mu", "m", "gamma_bar"}, "params");
      take(p, "kappa", cfg.params.kappa);
      take(p, "mu", cfg.params.mu);
      take(p, "m", cfg.params.m);
      take(p, "gamma_bar", cfg.params.gamma_bar);
    }
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.is_string()) {
        cfg.grid = Grid::parse(g.get<std::string>());
      } else {
        check_keys(g, {"start", "stop", "step"}, "grid");
        Grid grid;
        take(g, "start", grid.start);
        take(g, "stop", grid.stop);
        take(g, "step", grid.step);
        std::ostringstream os;
        os << format_double(grid.start) << ':' << format_double(grid.stop) << ':' << format_double(grid.step);
        cfg.grid = Grid::parse(os.str());
      }
    }
    if (j.contains("series")) {
      const json& s = j.at("series");
      check_keys(s, {"max_terms", "rel_tol", "strict"}, "series");
      take(s, "max_terms", cfg.series.max_terms);
      take(s, "rel_tol", cfg.series.rel_tol);
      take(s, "strict", cfg.series.strict);
    }
    if (j.contains("quad")) {
      const json& q = j.at("quad");
      check_keys(q, {"rel", "abs", "max_iter"}, "quad");
      take(q, "rel", cfg.quad.rel);
      take(q, "abs", cfg.quad.abs);
      take(q, "max_iter", cfg.quad.max_iter);
    }
    if (j.contains("mc")) {
      const json& m = j.at("mc");
      check_keys(m, {"n_samples", "seed", "streams", "parallel"}, "mc");
      take(m, "n_samples", cfg.mc.n_samples);
      take(m, "seed", cfg.mc.seed);
      take(m, "streams", cfg.mc.streams);
      take(m, "parallel", cfg.mc.parallel);
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), std::move(base));
}

}  // namespace kmu::cli
