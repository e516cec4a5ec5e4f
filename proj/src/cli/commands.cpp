#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>

#include "CLI11.hpp"
#include "json.hpp"
#include "kmu/cli.hpp"

namespace kmu::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

fading::Params fading_params(const RunConfig& cfg) {
  if (cfg.preset.empty()) return cfg.params;
  const fading::Preset which = fading::parse_preset(cfg.preset);
  double shape1 = cfg.params.kappa;
  double shape2 = cfg.params.m;
  if (which == fading::Preset::Nakagami || which == fading::Preset::NakagamiKappaZero) shape1 = cfg.params.mu;
  return fading::preset(which, cfg.params.gamma_bar, shape1, shape2);
}

// Mean-SNR points (linear) from the grid, in dB unless cfg.linear.
std::vector<double> gamma_bar_points(const RunConfig& cfg, const std::string& default_db_grid) {
  if (!cfg.grid) {
    if (default_db_grid.empty()) return {cfg.params.gamma_bar};
    std::vector<double> v = Grid::parse(default_db_grid).values();
    for (double& x : v) x = db_to_linear(x);
    return v;
  }
  std::vector<double> v = cfg.grid->values();
  if (!cfg.linear)
    for (double& x : v) x = db_to_linear(x);
  for (double x : v)
    if (!(x > 0.0)) throw DomainError("mean SNR grid values must be > 0 in linear units");
  return v;
}

std::vector<double> gamma_points(const RunConfig& cfg, const std::string& default_grid) {
  return (cfg.grid ? *cfg.grid : Grid::parse(default_grid)).values();
}

aep::ChiSelection chi_selection(const RunConfig& cfg) {
  aep::ChiSelection chi;
  chi.policy = aep::parse_chi_policy(cfg.chi_policy);
  return chi;
}

Table cmd_table2() {
  struct Block {
    int M;
    std::vector<double> gammas;
  };
  const std::vector<Block> blocks = {{4, {1, 2, 3, 4, 5, 6, 7}},
                                     {8, {2, 4, 6, 8, 10, 14, 16}},
                                     {16, {5, 10, 20, 30, 35, 40, 45}}};
  Table t;
  for (const char* c : {"M", "gamma", "exact", "approx", "rel_err"}) t.add_numeric(c);
  for (const Block& b : blocks) {
    for (double g : b.gammas) {
      const double e = awgn::mpsk_sep_exact(b.M, g);
      const double a = awgn::mpsk_sep_approx(b.M, g);
      t.add_row({static_cast<double>(b.M), g, e, a, awgn::relative_error(a, e)});
    }
  }
  return t;
}

Table cmd_table4() {
  Table t;
  for (const char* c : {"gamma", "exact", "approx", "rel_err"}) t.add_numeric(c);
  for (double g : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0}) {
    const double e = awgn::dqpsk_bep_exact(g);
    const double a = awgn::dqpsk_bep_approx(g);
    t.add_row({g, e, a, awgn::relative_error(a, e)});
  }
  return t;
}

Table cmd_aep_sweep(const RunConfig& cfg, bool single) {
  const auto scheme = awgn::ModulationSpec::parse(cfg.scheme);
  const fading::Params base = fading_params(cfg);
  const aep::ChiSelection chi = chi_selection(cfg);
  const fading::Sampler sampler = fading::parse_sampler(cfg.sampler);
  Table t;
  for (const char* c : {"gamma_bar_db", "gamma_bar", "closed", "asymptotic", "quad_approx", "quad_exact"})
    t.add_numeric(c);
  if (!single) {
    t.add_numeric("mc_mean");
    t.add_numeric("mc_std_error");
  }
  t.add_numeric("terms_used");
  t.add_numeric("truncation_bound");

  for (double gb : gamma_bar_points(cfg, single ? "" : "0:30:5")) {
    const fading::Params p = base.with_gamma_bar(gb);
    const aep::AepResult r = aep::aep_closed(p, scheme, cfg.series, chi);
    std::vector<double> row = {linear_to_db(gb),
                               gb,
                               r.value,
                               aep::aep_asymptotic(p, scheme, chi),
                               aep::aep_quadrature_oracle(p, scheme, aep::EpKind::Approx, cfg.quad, chi),
                               aep::aep_quadrature_oracle(p, scheme, aep::EpKind::Exact, cfg.quad, chi)};
    if (!single) {
      if (cfg.mc.n_samples > 0) {
        const aep::McEstimate mc = aep::aep_monte_carlo(p, scheme, aep::EpKind::Exact, cfg.mc, sampler, chi);
        row.push_back(mc.mean);
        row.push_back(mc.std_error);
      } else {
        row.push_back(kNaN);
        row.push_back(kNaN);
      }
    }
    row.push_back(r.terms_used);
    row.push_back(r.truncation_bound);
    t.add_row(row);
  }
  return t;
}

Table cmd_truncation(const RunConfig& cfg) {
  const fading::Params base = fading_params(cfg);
  const aep::ChiSelection chi = chi_selection(cfg);
  const aep::LambdaVariant variant = aep::parse_lambda_variant(cfg.variant);
  aep::SeriesControl loose = cfg.series;
  loose.strict = false;
  Table t;
  for (const char* c : {"gamma_bar_db", "gamma_bar", "L", "bound", "actual_tail"}) t.add_numeric(c);
  for (double gb : gamma_bar_points(cfg, "5:15:5")) {
    const fading::Params p = base.with_gamma_bar(gb);
    loose.max_terms = 60;
    loose.rel_tol = 1e-300;  // force exactly 60 terms
    const double reference = aep::abep_dqpsk_closed(p, loose, chi).value;
    for (int L = 1; L <= cfg.l_max; ++L) {
      loose.max_terms = L;
      const double vL = aep::abep_dqpsk_closed(p, loose, chi).value;
      t.add_row({linear_to_db(gb), gb, static_cast<double>(L), aep::truncation_bound(p, L, chi, variant),
                 std::fabs(reference - vL)});
    }
  }
  return t;
}

Table cmd_diversity(const RunConfig& cfg) {
  const auto scheme = awgn::ModulationSpec::parse(cfg.scheme);
  const fading::Params p = fading_params(cfg);
  const std::vector<double> grid = gamma_bar_points(cfg, "30:60:5");
  Table t;
  for (const char* c : {"gamma_bar_db", "gamma_bar", "log10_p", "ratio", "local_slope", "mu"}) t.add_numeric(c);
  for (const aep::DiversityPoint& d : aep::diversity_order(p, scheme, grid, chi_selection(cfg)))
    t.add_row({linear_to_db(d.gamma_bar), d.gamma_bar, d.log_p / std::log(10.0), d.ratio, d.local_slope, p.mu});
  return t;
}

Table cmd_chi(const RunConfig& cfg) {
  Table t;
  for (const char* c : {"gamma", "chi_exact", "chi_fitted", "abs_diff"}) t.add_numeric(c);
  for (double g : gamma_points(cfg, "0.1:15:0.1")) {
    const double e = awgn::chi_exact(g);
    const double f = awgn::chi_fitted(g);
    t.add_row({g, e, f, std::fabs(e - f)});
  }
  return t;
}

Table cmd_relerr(const RunConfig& cfg, bool with_error) {
  const auto scheme = awgn::ModulationSpec::parse(cfg.scheme);
  Table t;
  for (const char* c : {"gamma", "exact", "approx"}) t.add_numeric(c);
  if (with_error) t.add_numeric("rel_err");
  for (double g : gamma_points(cfg, "0.1:15:0.1")) {
    const double e = awgn::ep_exact(scheme, g);
    const double a = awgn::ep_approx(scheme, g);
    if (with_error)
      t.add_row({g, e, a, awgn::relative_error(a, e)});
    else
      t.add_row({g, e, a});
  }
  return t;
}

Table cmd_pdf(const RunConfig& cfg) {
  const fading::Params p = fading_params(cfg);
  Table t;
  for (const char* c : {"gamma", "pdf", "cdf"}) t.add_numeric(c);
  std::vector<double> pts;
  if (cfg.grid) {
    pts = cfg.grid->values();
  } else {
    for (int i = 0; i <= 50; ++i) pts.push_back(p.gamma_bar * 0.1 * i);
  }
  for (double g : pts) t.add_row({g, fading::pdf(p, g, cfg.quad), fading::cdf_numeric(p, g, cfg.quad)});
  return t;
}

Table cmd_sample(const RunConfig& cfg) {
  const fading::Params p = fading_params(cfg);
  const fading::Sampler sampler = fading::parse_sampler(cfg.sampler);
  if (cfg.mc.n_samples == 0) throw DomainError("sample: n_samples must be >= 1");
  const std::vector<double> s = fading::sample(p, cfg.mc, sampler);
  if (!cfg.dump.empty()) fading::write_sample_dump(cfg.dump, s, p, cfg.mc, sampler);
  const double n = static_cast<double>(s.size());
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : s) ss += (v - mean) * (v - mean);
  Table t;
  for (const char* c : {"n", "seed", "streams", "mean", "std", "gamma_bar"}) t.add_numeric(c);
  t.add_text("sampler");
  t.add_row({n, static_cast<double>(cfg.mc.seed), static_cast<double>(cfg.mc.streams), mean,
             std::sqrt(ss / std::max(1.0, n - 1.0)), p.gamma_bar},
            {fading::to_string(sampler)});
  return t;
}

Table cmd_marcum(const RunConfig& cfg) {
  Table t;
  for (const char* c : {"alpha", "beta", "q1"}) t.add_numeric(c);
  t.add_row({cfg.alpha, cfg.beta, specfun::marcum_q1(cfg.alpha, cfg.beta)});
  return t;
}

Table cmd_refit(const RunConfig& cfg) {
  const std::vector<double> grid = gamma_points(cfg, "0:15:0.05");
  const awgn::ChiFitTable published = awgn::ChiFitTable::published();
  std::vector<double> edges;
  for (const awgn::ChiFitRow& r : published.rows) edges.push_back(r.lo);
  edges.push_back(specfun::kInf);
  const awgn::ChiRefit fit = awgn::refit_chi(grid, edges);
  Table t;
  for (const char* c : {"lo", "hi", "c0", "d0", "c1", "d1", "rms", "rms_published"}) t.add_numeric(c);
  for (std::size_t i = 0; i < fit.table.rows.size(); ++i) {
    const awgn::ChiFitRow& r = fit.table.rows[i];
    std::vector<double> xs, ys;
    for (double g : grid)
      if (r.contains(g)) {
        xs.push_back(g);
        ys.push_back(awgn::chi_exact(g));
      }
    t.add_row({r.lo, r.hi, r.c0, r.d0, r.c1, r.d1, fit.rms[i], awgn::fit_rms(published.rows[i], xs, ys)});
  }
  return t;
}

void diagnostic(std::ostream& err, const std::string& type, const std::string& message,
                const nlohmann::ordered_json& extra = {}) {
  nlohmann::ordered_json j;
  j["level"] = "error";
  j["type"] = type;
  j["message"] = message;
  if (extra.is_object())
    for (const auto& item : extra.items()) j[item.key()] = item.value();
  err << j.dump() << '\n';
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"table2", "table4", "aep-sweep", "truncation", "diversity", "chi",
                                                 "relerr", "sample",  "ep",        "pdf",        "aep",       "marcum",
                                                 "refit"};
  return names;
}

Table run_command(const RunConfig& cfg) {
  cfg.validate();
  const std::string& c = cfg.command;
  if (c == "table2") return cmd_table2();
  if (c == "table4") return cmd_table4();
  if (c == "aep-sweep") return cmd_aep_sweep(cfg, false);
  if (c == "aep") return cmd_aep_sweep(cfg, true);
  if (c == "truncation") return cmd_truncation(cfg);
  if (c == "diversity") return cmd_diversity(cfg);
  if (c == "chi") return cmd_chi(cfg);
  if (c == "relerr") return cmd_relerr(cfg, true);
  if (c == "ep") return cmd_relerr(cfg, false);
  if (c == "pdf") return cmd_pdf(cfg);
  if (c == "sample") return cmd_sample(cfg);
  if (c == "marcum") return cmd_marcum(cfg);
  if (c == "refit") return cmd_refit(cfg);
  throw DomainError(c.empty() ? "no command given" : "unknown command '" + c + "'");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Error probabilities of M-PSK and GC-DQPSK over AWGN and kappa-mu shadowed fading", "kmu"};
  std::string command, scheme, grid, format, output, config, sampler, chi, variant, preset, dump;
  double kappa = 0, mu = 0, m = 0, gamma_bar_db = 0, rel_tol = 0, alpha = 0, beta = 0;
  int max_terms = 0, streams = 0, l_max = 0;
  std::uint64_t seed = 0, samples = 0;
  bool linear = false;

  std::string commands;
  for (const std::string& n : command_names()) commands += (commands.empty() ? "" : ", ") + n;
  auto* o_command = app.add_option("command", command, "One of: " + commands);
  auto* o_kappa = app.add_option("--kappa", kappa, "kappa >= 0");
  auto* o_mu = app.add_option("--mu", mu, "mu > 0 (also m-hat for the nakagami presets)");
  auto* o_m = app.add_option("--m", m, "shadowing shape m > 0");
  auto* o_gb = app.add_option("--gamma-bar-db", gamma_bar_db, "mean SNR in dB (linear with --linear)");
  auto* o_linear = app.add_flag("--linear", linear, "mean-SNR inputs are linear, not dB");
  auto* o_scheme = app.add_option("--scheme", scheme, "mpsk:M or dqpsk");
  auto* o_grid = app.add_option("--grid", grid, "start:stop:step (inclusive)");
  auto* o_terms = app.add_option("--max-terms", max_terms, "series truncation length L");
  auto* o_tol = app.add_option("--rel-tol", rel_tol, "series relative tolerance");
  auto* o_seed = app.add_option("--seed", seed, "Monte Carlo seed");
  auto* o_samples = app.add_option("--samples", samples, "Monte Carlo sample count (0 disables)");
  auto* o_streams = app.add_option("--streams", streams, "independent RNG streams");
  auto* o_sampler = app.add_option("--sampler", sampler, "physical or inverse-cdf");
  auto* o_chi = app.add_option("--chi", chi, "first-row, mean-snr, fixed or piecewise");
  auto* o_variant = app.add_option("--variant", variant, "truncation tail form: printed, pochhammer, dominated");
  auto* o_lmax = app.add_option("--l-max", l_max, "largest L for the truncation command");
  auto* o_preset = app.add_option("--preset", preset,
                                  "rayleigh, rician, nakagami, nakagami-kappa-zero, rician-shadowed, one-sided-gaussian");
  auto* o_alpha = app.add_option("--alpha", alpha, "marcum: alpha");
  auto* o_beta = app.add_option("--beta", beta, "marcum: beta");
  auto* o_dump = app.add_option("--dump", dump, "sample: write float64 samples here (+ .json sidecar)");
  auto* o_format = app.add_option("--format", format, "csv or json");
  auto* o_out = app.add_option("--out", output, "output path (default stdout)");
  app.add_option("--config", config, "JSON file with RunConfig fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    diagnostic(err, "usage_error", e.what());
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config.empty()) cfg = load_config(config, cfg);
    if (o_command->count()) cfg.command = command;
    if (o_kappa->count()) cfg.params.kappa = kappa;
    if (o_mu->count()) cfg.params.mu = mu;
    if (o_m->count()) cfg.params.m = m;
    if (o_linear->count()) cfg.linear = linear;
    if (o_gb->count()) cfg.params.gamma_bar = cfg.linear ? gamma_bar_db : db_to_linear(gamma_bar_db);
    if (o_scheme->count()) cfg.scheme = scheme;
    if (o_grid->count()) cfg.grid = Grid::parse(grid);
    if (o_terms->count()) cfg.series.max_terms = max_terms;
    if (o_tol->count()) cfg.series.rel_tol = rel_tol;
    if (o_seed->count()) cfg.mc.seed = seed;
    if (o_samples->count()) cfg.mc.n_samples = samples;
    if (o_streams->count()) cfg.mc.streams = streams;
    if (o_sampler->count()) cfg.sampler = sampler;
    if (o_chi->count()) cfg.chi_policy = chi;
    if (o_variant->count()) cfg.variant = variant;
    if (o_lmax->count()) cfg.l_max = l_max;
    if (o_preset->count()) cfg.preset = preset;
    if (o_alpha->count()) cfg.alpha = alpha;
    if (o_beta->count()) cfg.beta = beta;
    if (o_dump->count()) cfg.dump = dump;
    if (o_format->count()) cfg.format = format;
    if (o_out->count()) cfg.output = output;

    const Table table = run_command(cfg);

    std::ofstream file;
    std::ostream* os = &out;
    if (!cfg.output.empty()) {
      file.open(cfg.output);
      if (!file) throw DomainError("cannot open '" + cfg.output + "' for writing");
      os = &file;
    }
    if (cfg.format == "json")
      table.write_json(*os);
    else
      table.write_csv(*os);
    return 0;
  } catch (const DomainError& e) {
    diagnostic(err, "domain_error", e.what());
    return 2;
  } catch (const RangeError& e) {
    diagnostic(err, "range_error", e.what());
    return 2;
  } catch (const ConvergenceError& e) {
    nlohmann::ordered_json extra;
    extra["estimate"] = std::isfinite(e.estimate()) ? nlohmann::ordered_json(e.estimate()) : nullptr;
    extra["error_bound"] = std::isfinite(e.error_bound()) ? nlohmann::ordered_json(e.error_bound()) : nullptr;
    diagnostic(err, "convergence_error", e.what(), extra);
    return 3;
  } catch (const FitError& e) {
    nlohmann::ordered_json extra;
    extra["diagnostics"] = nlohmann::ordered_json::parse(e.diagnostics(), nullptr, false);
    if (extra["diagnostics"].is_discarded()) extra["diagnostics"] = e.diagnostics();
    diagnostic(err, "fit_error", e.what(), extra);
    return 3;
  } catch (const std::exception& e) {
    diagnostic(err, "internal_error", e.what());
    return 1;
  }
}

}  // namespace kmu::cli
