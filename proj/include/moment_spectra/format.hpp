#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

namespace moment_spectra {

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite.
std::string format_double(double value);

/// Complex literal "re+imi" / "re-imi", e.g. "0.5+0i".
std::string format_complex(std::complex<double> value);

/// Dense matrix as CSV, one row per line, entries in "re+imi" form.
std::string matrix_csv(const Eigen::MatrixXcd& matrix);

}  // namespace moment_spectra
