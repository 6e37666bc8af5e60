// Copyright 2026 The singcov Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "singcov/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace singcov {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix_csv(std::ostream& out, const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("write_matrix_csv: matrix must be square");
  }
  out << "m=" << a.rows() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << format_double(a(i, j).real()) << ',' << format_double(a(i, j).imag());
    }
    out << '\n';
  }
}

CMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("m=", 0) != 0) {
    throw std::runtime_error("read_matrix_csv: missing 'm=<dim>' header");
  }
  Index m = 0;
  try {
    m = std::stol(line.substr(2));
  } catch (const std::exception&) {
    throw std::runtime_error("read_matrix_csv: bad header '" + line + "'");
  }
  if (m < 1) throw std::runtime_error("read_matrix_csv: dimension must be >= 1");

  CMatrix a(m, m);
  for (Index i = 0; i < m; ++i) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("read_matrix_csv: expected " + std::to_string(m) + " rows, got " +
                               std::to_string(i));
    }
    std::istringstream row(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(row, field, ',')) {
      try {
        values.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw std::runtime_error("read_matrix_csv: bad number '" + field + "' in row " +
                                 std::to_string(i));
      }
    }
    if (static_cast<Index>(values.size()) != 2 * m) {
      throw std::runtime_error("read_matrix_csv: row " + std::to_string(i) + " has " +
                               std::to_string(values.size()) + " fields, expected " +
                               std::to_string(2 * m));
    }
    for (Index j = 0; j < m; ++j) a(i, j) = Complex(values[2 * j], values[2 * j + 1]);
  }
  return a;
}

void write_matrix_csv_file(const std::string& path, const CMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_matrix_csv(out, a);
}

CMatrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_matrix_csv(in);
}

void write_esd_csv(std::ostream& out, const EmpiricalSpectralDistribution& esd) {
  out << "index,eigenvalue\n";
  const auto& ev = esd.eigenvalues();
  for (std::size_t i = 0; i < ev.size(); ++i) out << i << ',' << format_double(ev[i]) << '\n';
}

}  // namespace singcov
