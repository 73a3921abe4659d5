#include "moment_spectra/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "moment_spectra/error.hpp"

namespace moment_spectra {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::QuadratureFailed: return "QuadratureFailed";
    case ErrorKind::DuplicateMoments: return "DuplicateMoments";
    case ErrorKind::DegenerateAtZero: return "DegenerateAtZero";
    case ErrorKind::DivisionBlowUp: return "DivisionBlowUp";
    case ErrorKind::HypothesesNotMet: return "HypothesesNotMet";
    case ErrorKind::DenseLimitExceeded: return "DenseLimitExceeded";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Unknown";
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 32> buffer{};
  const auto [ptr, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

std::string format_complex(std::complex<double> value) {
  const double im = value.imag();
  std::string out = format_double(value.real());
  if (std::signbit(im) && im != 0.0) {
    out += "-" + format_double(-im);
  } else {
    out += "+" + format_double(im);
  }
  return out + "i";
}

std::string matrix_csv(const Eigen::MatrixXcd& matrix) {
  std::string out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_complex(matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace moment_spectra
