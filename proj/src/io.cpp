#include "spopo/io.hpp"

#include "spopo/coupling.hpp"
#include "spopo/squeezing.hpp"
#include "spopo/supermodes.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace spopo::io {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

std::string csv_row(const std::vector<double>& values) {
  std::string row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) row += ',';
    row += format_double(values[i]);
  }
  return row;
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) throw std::invalid_argument("not a number: '" + text + "'");
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0') throw std::invalid_argument("trailing characters in number: '" + text + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace spopo::io

namespace spopo {

void write_coupling(std::ostream& out, const CouplingMatrix& L) {
  out << "# coupling matrix L_{m,q}, N=" << L.window.size() << ", m,q = " << L.window.first() << ".."
      << L.window.last() << ", row-major\n";
  for (Eigen::Index i = 0; i < L.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < L.entries.cols(); ++j) {
      if (j) out << ' ';
      out << io::format_double(L.entries(i, j));
    }
    out << '\n';
  }
}

void write_eigenvalues(std::ostream& out, const SupermodeSet& s) {
  out << "k,Lambda_k\n";
  for (int k = 0; k < s.size(); ++k) out << k << ',' << io::format_double(s.lambda(k)) << '\n';
}

void write_supermode(std::ostream& out, const SupermodeSet& s, int k) {
  if (k < 0 || k >= s.size()) throw std::invalid_argument("write_supermode: index out of range");
  out << "m,L_km\n";
  for (int m = s.window.first(); m <= s.window.last(); ++m)
    out << m << ',' << io::format_double(s.eigenvectors(s.window.index(m), k)) << '\n';
}

void write_spectrum_csv(std::ostream& out, const VarianceSpectrum& spectrum) {
  out << "omega_rad_per_s,v_minus,v_plus\n";
  for (Eigen::Index i = 0; i < spectrum.grid.omegas.size(); ++i)
    out << io::csv_row({spectrum.grid.omegas(i), spectrum.v_minus(i), spectrum.v_plus(i)}) << '\n';
}

}  // namespace spopo
