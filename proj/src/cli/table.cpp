#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "kmu/cli.hpp"

namespace kmu::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add_row(const std::vector<double>& values, const std::vector<std::string>& text) {
  std::size_t vi = 0, ti = 0;
  for (Column& c : columns_) {
    if (c.is_text) {
      if (ti >= text.size()) throw DomainError("Table::add_row: missing text value");
      c.str.push_back(text[ti++]);
    } else {
      if (vi >= values.size()) throw DomainError("Table::add_row: missing numeric value");
      c.num.push_back(values[vi++]);
    }
  }
  if (vi != values.size() || ti != text.size()) throw DomainError("Table::add_row: too many values");
  ++rows_;
}

std::size_t Table::index(const std::string& name) const {
  for (std::size_t c = 0; c < columns_.size(); ++c)
    if (columns_[c].name == name) return c;
  throw DomainError("Table: no column '" + name + "'");
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << csv_escape(columns_[c].name);
  os << '\n';
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Column& col = columns_[c];
      os << (c ? "," : "") << (col.is_text ? csv_escape(col.str[r]) : format_double(col.num[r]));
    }
    os << '\n';
  }
}

void Table::write_json(std::ostream& os) const {
  // Numbers are emitted through format_double so JSON and CSV carry the same digits.
  os << "{";
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const Column& col = columns_[c];
    os << (c ? ",\n " : "\n ") << nlohmann::json(col.name).dump() << ": [";
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r) os << ", ";
      if (col.is_text)
        os << nlohmann::json(col.str[r]).dump();
      else
        os << (std::isfinite(col.num[r]) ? format_double(col.num[r]) : "null");
    }
    os << "]";
  }
  os << "\n}\n";
}

}  // namespace kmu::cli
