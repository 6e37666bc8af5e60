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

#ifndef SINGCOV_MATRIX_IO_HPP
#define SINGCOV_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include "singcov/linalg.hpp"

namespace singcov {

// Shortest round-trip text for a double: 17 significant digits.
std::string format_double(double x);

// Matrix exchange format: a header line "m=<dim>" followed by m lines, each
// holding the row's entries as comma-separated real,imag pairs (2m fields).
void write_matrix_csv(std::ostream& out, const CMatrix& a);
CMatrix read_matrix_csv(std::istream& in);

void write_matrix_csv_file(const std::string& path, const CMatrix& a);
CMatrix read_matrix_csv_file(const std::string& path);

// "index,eigenvalue" with ascending eigenvalues.
void write_esd_csv(std::ostream& out, const EmpiricalSpectralDistribution& esd);

}  // namespace singcov

#endif  // SINGCOV_MATRIX_IO_HPP
