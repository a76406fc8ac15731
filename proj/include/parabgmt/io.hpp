#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "parabgmt/measure.hpp"

namespace parabgmt {

/// Malformed input with a 1-based line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Shortest decimal text that reads back to the same double.
std::string shortest(double v);

/// Header `x1,...,xn,t,w`, one atom per row in canonical order.
void write_csv(std::ostream& out, const DiscreteMeasure& mu);
void write_csv_file(const std::string& path, const DiscreteMeasure& mu);

DiscreteMeasure read_csv(std::istream& in, const std::string& source = "<input>");
DiscreteMeasure read_csv_file(const std::string& path);

}  // namespace parabgmt
