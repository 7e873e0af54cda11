#include "hyper/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace hyper {

Metadata& Metadata::add(const std::string& key, const std::string& value) {
  entries.emplace_back(key, value);
  return *this;
}

Metadata& Metadata::add(const std::string& key, double value) { return add(key, fmt_short(value)); }

const std::string* Metadata::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

json Metadata::to_json() const {
  json j = json::object();
  for (const auto& [k, v] : entries) j[k] = v;
  return j;
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) throw std::invalid_argument("row width does not match the header");
  rows.push_back(std::move(cells));
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (const auto& [k, v] : meta.entries) {
    std::string flat = v;
    for (char& c : flat)
      if (c == '\n' || c == '\r') c = ' ';
    os << "# " << k << ": " << flat << "\r\n";
  }
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << "\r\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return os.str();
}

namespace {

// Numeric cells become JSON numbers, empty cells null, the rest strings.
json cell_json(const std::string& s) {
  if (s.empty()) return nullptr;
  if (s == "nan" || s == "inf" || s == "-inf") return s;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() + s.size()) {
    if (s.find_first_of(".eE") == std::string::npos) {
      long long i = std::strtoll(s.c_str(), &end, 10);
      if (end == s.c_str() + s.size()) return i;
    }
    return v;
  }
  return s;
}

}  // namespace

json Table::to_json() const {
  json j;
  j["metadata"] = meta.to_json();
  j["columns"] = columns;
  json rs = json::array();
  for (const auto& r : rows) {
    json row = json::array();
    for (const auto& c : r) row.push_back(cell_json(c));
    rs.push_back(std::move(row));
  }
  j["rows"] = rs;
  return j;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  if (!std::isfinite(v)) return fmt(v);
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(complex_json(M(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace hyper
