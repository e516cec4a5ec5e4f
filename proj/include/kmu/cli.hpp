#pragma once

// Command-line front end: configuration, tabular output and command dispatch.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kmu/aep.hpp"

namespace kmu::cli {

// ---------------------------------------------------------------------------
// Output

/// Column-oriented table; each column is either numeric or text.
class Table {
 public:
  void add_numeric(std::string name) { columns_.push_back({std::move(name), false, {}, {}}); }
  void add_text(std::string name) { columns_.push_back({std::move(name), true, {}, {}}); }

  /// Appends one row; `values` covers the numeric columns in order and
  /// `text` the text columns in order.
  void add_row(const std::vector<double>& values, const std::vector<std::string>& text = {});

  std::size_t rows() const { return rows_; }
  std::size_t columns() const { return columns_.size(); }
  const std::string& name(std::size_t c) const { return columns_[c].name; }
  double number(std::size_t row, std::size_t c) const { return columns_[c].num[row]; }
  std::size_t index(const std::string& name) const;

  /// Header line, then one line per row; floats with 17 significant digits.
  void write_csv(std::ostream& os) const;
  /// {"column": [values...], ...} in column order; NaN/inf become null.
  void write_json(std::ostream& os) const;

 private:
  struct Column {
    std::string name;
    bool is_text;
    std::vector<double> num;
    std::vector<std::string> str;
  };
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

/// "%.17g"; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Configuration

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  /// Parses "start:stop:step" (or a single number).
  static Grid parse(const std::string& text);
  /// start, start+step, ... up to stop inclusive (within 1e-9 step).
  std::vector<double> values() const;
};

struct RunConfig {
  std::string command;
  std::string scheme = "dqpsk";
  fading::Params params{1.0, 1.0, 1.0, 10.0};  // gamma_bar linear
  bool linear = false;                          // fading grids given in linear units instead of dB
  std::optional<Grid> grid;
  aep::SeriesControl series{};
  specfun::Tolerance quad{1e-10, 1e-300, 10000};
  fading::McControl mc{10000, 1, 1, true};
  std::string sampler = "inverse-cdf";
  std::string chi_policy = "first-row";
  std::string variant = "pochhammer";
  std::string preset;  // optional fading preset, overrides kappa/mu/m
  double alpha = 0.0;  // marcum command
  double beta = 0.0;
  int l_max = 10;      // truncation command: L = 1..l_max
  std::string dump;    // sample command: binary dump path
  std::string output;  // empty: stdout
  std::string format = "csv";

  void validate() const;
};

/// Reads a JSON object whose keys match RunConfig field names; nested objects
/// for params, grid, series, quad and mc. Unknown keys are rejected.
RunConfig load_config(const std::string& path, RunConfig base = {});
RunConfig config_from_json(const std::string& text, RunConfig base = {});

// ---------------------------------------------------------------------------
// Commands

/// Names of all commands.
const std::vector<std::string>& command_names();

/// Runs one command and returns its table.
Table run_command(const RunConfig& cfg);

/// Full CLI: parses argv, runs, writes output. Exit codes: 0 success,
/// 2 domain or usage error, 3 convergence error, 1 anything else.
/// Diagnostics go to `err` as JSON lines.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kmu::cli
