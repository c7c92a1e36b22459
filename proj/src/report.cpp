#include "cubist/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cubist {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string g17(cd v) { return g17(v.real()) + "," + g17(v.imag()); }

void Report::add(const std::string& name, const std::string& anchor,
                 double residual, double tol) {
  records.push_back({name, anchor, residual, tol, residual <= tol});
}

bool Report::all_pass() const {
  for (const auto& r : records)
    if (!r.pass) return false;
  return true;
}

int Report::print(std::ostream& os) const {
  int failures = 0;
  for (const auto& r : records) {
    os << (r.pass ? "pass" : "FAIL") << "  " << r.anchor << "  residual="
       << g17(r.residual) << "  tol=" << g17(r.tol) << "  " << r.name << "\n";
    if (!r.pass) ++failures;
  }
  return failures;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::string body = header;
  body += '\n';
  for (const auto& r : rows) {
    body += r;
    body += '\n';
  }
  write_text(path, body);
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << body;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace cubist
