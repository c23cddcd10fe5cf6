#include "spopo/comb.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace spopo {

std::pair<ModeWindow, Vector<double>> read_comb_coefficients(std::istream& in) {
  std::map<long, double> values;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("comb file line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long index;
    double value;
    if (!(fields >> index)) fail("expected an integer index");
    if (!(fields >> value)) fail("expected a value");
    if (double imag; fields >> imag) {
      if (imag != 0.0) fail("complex (chirped) coefficients are not supported");
    }
    if (std::string extra; fields >> extra) fail("unexpected trailing field '" + extra + "'");
    if (!values.emplace(index, value).second) fail("duplicate index " + std::to_string(index));
  }
  if (values.empty()) throw std::invalid_argument("comb file: no data");

  const long M = values.rbegin()->first;
  if (M < 0 || values.begin()->first != -M || static_cast<long>(values.size()) != 2 * M + 1)
    throw std::invalid_argument("comb file: indices must cover -M..M contiguously");
  Vector<double> coefficients(2 * M + 1);
  for (const auto& [index, value] : values) coefficients(index + M) = value;
  return {ModeWindow{static_cast<int>(M)}, std::move(coefficients)};
}

PumpSpectrum read_pump_spectrum(std::istream& in) {
  return custom_pump(read_comb_coefficients(in).second);
}

PumpSpectrum load_pump_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open pump spectrum file '" + path + "'");
  return read_pump_spectrum(in);
}

}  // namespace spopo
