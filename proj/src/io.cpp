#include "parabgmt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <system_error>
#include <vector>

namespace parabgmt {

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

void write_csv(std::ostream& out, const DiscreteMeasure& mu) {
  const int n = mu.n();
  for (int i = 1; i <= n; ++i) out << 'x' << i << ',';
  out << "t,w\n";
  const auto& cloud = mu.points();
  std::string line;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    line.clear();
    for (const double v : cloud[i]) {
      line += shortest(v);
      line += ',';
    }
    line += shortest(mu.weights()[i]);
    line += '\n';
    out << line;
  }
}

void write_csv_file(const std::string& path, const DiscreteMeasure& mu) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(out, mu);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line, std::vector<std::size_t>& columns) {
  std::vector<std::string_view> out;
  columns.clear();
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    columns.push_back(start + 1);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

DiscreteMeasure read_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> columns;
  if (!std::getline(in, line)) throw ParseError(source, 1, 1, "empty input, expected header x1,...,xn,t,w");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line, columns);
  if (header.size() < 3) throw ParseError(source, 1, 1, "header needs at least x1,t,w");
  const int n = static_cast<int>(header.size()) - 2;
  for (int i = 0; i < n; ++i) {
    if (header[static_cast<std::size_t>(i)] != "x" + std::to_string(i + 1)) {
      throw ParseError(source, 1, columns[static_cast<std::size_t>(i)],
                       "expected column name x" + std::to_string(i + 1));
    }
  }
  if (header[static_cast<std::size_t>(n)] != "t") throw ParseError(source, 1, columns[static_cast<std::size_t>(n)], "expected column name t");
  if (header[static_cast<std::size_t>(n) + 1] != "w") throw ParseError(source, 1, columns[static_cast<std::size_t>(n) + 1], "expected column name w");

  PointCloud cloud(n);
  std::vector<double> weights;
  std::vector<double> row(static_cast<std::size_t>(n) + 1);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line, columns);
    if (fields.size() != header.size()) {
      const std::size_t col = fields.size() > header.size() ? columns[header.size()] : line.size() + 1;
      throw ParseError(source, lineno, col,
                       "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      const auto f = fields[j];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        const std::size_t offset = f.empty() ? 0 : static_cast<std::size_t>(res.ptr - f.data());
        throw ParseError(source, lineno, columns[j] + (res.ec == std::errc() ? offset : 0),
                         "invalid number '" + std::string(f) + "'");
      }
      if (!std::isfinite(v)) throw ParseError(source, lineno, columns[j], "non-finite value");
      if (j + 1 == fields.size()) {
        if (!(v > 0.0)) throw ParseError(source, lineno, columns[j], "weight must be positive");
        weights.push_back(v);
      } else {
        row[j] = v;
      }
    }
    cloud.push_back(std::span<const double>(row));
  }
  return DiscreteMeasure(std::move(cloud), std::move(weights));
}

DiscreteMeasure read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in, path);
}

}  // namespace parabgmt
