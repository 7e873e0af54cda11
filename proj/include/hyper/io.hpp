#pragma once

#include <Eigen/Dense>
#include <complex>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

namespace hyper {

using json = nlohmann::ordered_json;

/// Ordered key/value header written in front of every table and report.
struct Metadata {
  std::vector<std::pair<std::string, std::string>> entries;

  Metadata& add(const std::string& key, const std::string& value);
  Metadata& add(const std::string& key, double value);
  const std::string* find(const std::string& key) const;
  json to_json() const;
};

/// Table of preformatted cells. CSV output puts the metadata as "# key: value"
/// lines before the header row.
struct Table {
  Metadata meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  std::string to_csv() const;
  json to_json() const;
};

/// %.17g, with "nan", "inf" and "-inf" for non-finite values and "0" for both zeros.
std::string fmt(double v);
/// %.12g, for prose in metadata.
std::string fmt_short(double v);
std::string fmt(int v);
std::string fmt(std::size_t v);

/// RFC-4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(const std::string& s);

/// Row-major array of [re, im] pairs.
json matrix_json(const Eigen::MatrixXcd& M);
json complex_json(std::complex<double> z);

/// Writes to path, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace hyper
