#pragma once

// CSV and JSON serialization. Numbers are printed with 17 significant digits
// and no locale, so identical inputs give byte-identical files.

#include <iosfwd>
#include <string>
#include <vector>

#include "tracesum/periodic.hpp"

namespace tracesum {

std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  size_t columns_;
};

/// Columns residue,re,im.
void write_csv(std::ostream& out, const PeriodicFunction& K);
std::string to_json(const PeriodicFunction& K);
PeriodicFunction periodic_from_json(const std::string& text);

}  // namespace tracesum
