#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cubist/gexp.hpp"

namespace cubist {

// %.17g: shortest form that still round-trips a double exactly, so emitted
// tables are byte-stable across runs and thread counts.
std::string g17(double v);
std::string g17(cd v);  // "re,im" pair for CSV columns

struct ReportRecord {
  std::string name;    // what was checked, e.g. "det-one @ lambda=0.6"
  std::string anchor;  // stable id shared with the docs, e.g. "det-one"
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<ReportRecord> records;
  void add(const std::string& name, const std::string& anchor, double residual,
           double tol);
  bool all_pass() const;
  // One line per record; returns the number of failures.
  int print(std::ostream& os) const;
};

// Joins header + rows with '\n' and writes the file in one shot.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows);

void write_text(const std::string& path, const std::string& body);

}  // namespace cubist
