#include "moment_spectra/invariance.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "moment_spectra/error.hpp"
#include "moment_spectra/matrix_functions.hpp"
#include "moment_spectra/quadrature.hpp"

namespace moment_spectra {

namespace {

// C(n, m) p^m q^(n-m), with exact zero powers handled explicitly.
double binomial_term(int n, int m, double p, double q) {
  const int r = n - m;
  if ((p == 0.0 && m > 0) || (q == 0.0 && r > 0)) return 0.0;
  if (n <= 60) return binomial(n, m) * std::pow(p, m) * std::pow(q, r);
  double log_value = log_binomial(n, m);
  if (m > 0) log_value += m * std::log(p);
  if (r > 0) log_value += r * std::log(q);
  return std::exp(log_value);
}

void require_dim(Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dim must be >= 1");
}

}  // namespace

Complex PowerSeriesVector::evaluate(Complex z) const {
  Complex acc(0.0);
  for (Eigen::Index n = coefficients.size() - 1; n >= 0; --n) {
    acc = acc * z + coefficients(n);
  }
  return acc;
}

DenseMatrix composition_matrix_phi(double t, Eigen::Index dim) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be >= 0");
  require_dim(dim);
  const double p = std::exp(-t);
  const double q = -std::expm1(-t);
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index row = 0; row <= n; ++row) {
      m(row, n) = binomial_term(static_cast<int>(n), static_cast<int>(row), p, q);
    }
  }
  return m;
}

DenseMatrix wt_matrix(double t, Eigen::Index dim) {
  require_dim(dim);
  DenseMatrix toeplitz = DenseMatrix::Zero(dim, dim);
  Eigen::VectorXd powers(dim);
  double power = 1.0;
  for (Eigen::Index n = 0; n < dim; ++n) {
    powers(n) = power;
    power *= t;
  }
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (Eigen::Index row = col; row < dim; ++row) {
      toeplitz(row, col) = powers(row - col);
    }
  }
  return toeplitz * powers.cast<Complex>().asDiagonal();
}

DenseMatrix vt_matrix(double t, Eigen::Index dim) {
  require_dim(dim);
  Eigen::VectorXcd kernel(dim);
  double power = 1.0;
  for (Eigen::Index n = 0; n < dim; ++n) {
    kernel(n) = power;
    power *= t;
  }
  return kernel * kernel.transpose();
}

Eigen::MatrixXd integrated_composition_matrix(Eigen::Index dim, double tolerance) {
  require_dim(dim);
  QuadratureOptions options;
  options.abs_tolerance = tolerance;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m <= n; ++m) {
      const int ni = static_cast<int>(n);
      const int mi = static_cast<int>(m);
      // e^{-t} dt = -du with u = e^{-t}; the entry becomes C(n,m) u^m (1-u)^{n-m}.
      out(m, n) = integrate(
                      [ni, mi](double u) { return binomial_term(ni, mi, u, 1.0 - u); },
                      0.0, 1.0, options)
                      .value;
    }
  }
  return out;
}

double cesaro_adjoint_integral_check(Eigen::Index dim) {
  const Eigen::MatrixXd integral = integrated_composition_matrix(dim);
  double deviation = 0.0;
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      const double expected = m <= n ? 1.0 / (n + 1.0) : 0.0;
      deviation = std::max(deviation, std::abs(integral(m, n) - expected));
    }
  }
  return deviation;
}

double rhaly_adjoint_integral_check(const WeightSequence& weights, Eigen::Index dim) {
  require_dim(dim);
  if (weights.size() < dim) {
    throw Error(ErrorKind::InvalidArgument, "fewer weights than dim");
  }
  const Eigen::MatrixXd integral = integrated_composition_matrix(dim);
  ComplexVector diagonal(dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    diagonal(n) = (n + 1.0) * std::conj(weights.values(n));
  }
  const DenseMatrix represented = integral.cast<Complex>() * diagonal.asDiagonal();
  const DenseMatrix adjoint = dense(TerracedOperator(weights, dim)).adjoint();
  return (represented - adjoint).cwiseAbs().maxCoeff();
}

double monomial_invariance_check(const DenseMatrix& a, Eigen::Index k) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix must be square");
  }
  if (k < 0 || k >= a.rows()) {
    throw Error(ErrorKind::InvalidArgument, "k must be < dim");
  }
  if (k == 0) return 0.0;
  return a.topRightCorner(k, a.cols() - k).cwiseAbs().maxCoeff();
}

KernelRank kernel_span_rank(const std::vector<double>& locations, Eigen::Index dim,
                            double relative_threshold) {
  require_dim(dim);
  if (locations.empty() || static_cast<Eigen::Index>(locations.size()) > dim) {
    throw Error(ErrorKind::InvalidArgument, "need 1 <= count <= dim locations");
  }
  std::vector<double> sorted = locations;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::InvalidArgument, "duplicate kernel locations");
  }
  for (double t : locations) {
    if (!(t >= 0.0 && t < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "kernel locations must lie in [0,1)");
    }
  }
  const auto count = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXd kernels(dim, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    double power = 1.0;
    for (Eigen::Index n = 0; n < dim; ++n) {
      kernels(n, i) = power;
      power *= locations[static_cast<std::size_t>(i)];
    }
  }
  const Eigen::MatrixXd gram = kernels.transpose() * kernels;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  KernelRank result;
  result.singular_values = svd.singularValues();
  result.relative_threshold = relative_threshold;
  const double cutoff = relative_threshold * result.singular_values(0);
  result.rank = (result.singular_values.array() >= cutoff).count();
  return result;
}

double hilbert_column_check(Eigen::Index n, Eigen::Index dim, double tolerance) {
  require_dim(dim);
  if (n < 0 || n >= dim) throw Error(ErrorKind::InvalidArgument, "n must be < dim");
  QuadratureOptions options;
  options.abs_tolerance = tolerance;
  double deviation = 0.0;
  for (Eigen::Index m = 0; m < dim; ++m) {
    const int top = static_cast<int>(n + m);
    const int ni = static_cast<int>(n);
    const double value =
        integrate([top, ni](double t) { return binomial_term(top, ni, t, 1.0 - t); },
                  0.0, 1.0, options)
            .value;
    deviation = std::max(deviation, std::abs(value - 1.0 / (n + m + 1.0)));
  }
  return deviation;
}

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["params"] = params;
  j["deviation_or_defect"] = value;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  return j;
}

}  // namespace moment_spectra
