#include "relu/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace relu {

std::string format_double(double v) {
  char buf[40];
  // %.17g always round-trips; prefer the shorter form when it does too.
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_finite(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("csv: unparsable ") + what + " '" + s + "'");
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw std::invalid_argument(std::string("csv: trailing junk in ") + what);
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("csv: non-finite ") + what);
  return v;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty file " + path);

  const std::vector<std::string> header = split_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw std::invalid_argument("csv: expected header x0,...,y in " + path);
  const int p = static_cast<int>(header.size()) - 1;
  for (int j = 0; j < p; ++j) {
    if (header[static_cast<std::size_t>(j)] != "x" + std::to_string(j))
      throw std::invalid_argument("csv: expected header column x" + std::to_string(j));
  }

  std::vector<Sample> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line);
    if (static_cast<int>(f.size()) != p + 1)
      throw std::invalid_argument("csv: row with wrong field count in " + path);
    Sample s;
    s.x.resize(p);
    for (int j = 0; j < p; ++j) s.x[j] = parse_finite(f[static_cast<std::size_t>(j)], "feature");
    s.y = parse_finite(f.back(), "label");
    rows.push_back(std::move(s));
  }
  return build_dataset(rows);
}

void save_dataset_csv(const std::string& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  for (int j = 0; j < d.p(); ++j) out << "x" << j << ",";
  out << "y\n";
  for (int i = 0; i < d.n(); ++i) {
    const double* row = d.x_row(i);
    for (int j = 0; j < d.p(); ++j) out << format_double(row[j]) << ",";
    out << format_double(d.y(i)) << "\n";
  }
}

}  // namespace relu
