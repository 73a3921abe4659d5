#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "moment_spectra/operators.hpp"

namespace moment_spectra {

/// Truncated Hardy-space element sum x_n z^n; the norm is the coefficient l2 norm.
struct PowerSeriesVector {
  ComplexVector coefficients;

  Eigen::Index dim() const { return coefficients.size(); }
  double norm() const { return coefficients.norm(); }
  Complex evaluate(Complex z) const;
};

/// Matrix of f -> f o phi_t, phi_t(z) = e^{-t} z + 1 - e^{-t}, in the monomial
/// basis: entry (m, n) = C(n, m) e^{-tm} (1 - e^{-t})^{n-m} for m <= n.
/// Upper triangular, so truncation commutes with composition.
DenseMatrix composition_matrix_phi(double t, Eigen::Index dim);

/// Matrix of W_t f(z) = f(tz) / (1 - tz), built as the product of the
/// Toeplitz multiplication by 1/(1 - tz) with diag(t^n).
DenseMatrix wt_matrix(double t, Eigen::Index dim);

/// Matrix of V_t f(z) = f(t) / (1 - tz): kernel column times evaluation row.
DenseMatrix vt_matrix(double t, Eigen::Index dim);

/// \int_0^inf e^{-t} (C_{phi_t})_{m,n} dt, integrated by quadrature in
/// u = e^{-t} over (0, 1].
Eigen::MatrixXd integrated_composition_matrix(Eigen::Index dim,
                                              double tolerance = 1e-14);

/// max deviation between the integral representation and C^* (column n has
/// 1/(n+1) in rows m <= n).
double cesaro_adjoint_integral_check(Eigen::Index dim);

/// Same integral with D_{conj a} = diag((n+1) conj(a_n)) applied first,
/// compared against the conjugate transpose of the terraced matrix.
double rhaly_adjoint_integral_check(const WeightSequence& weights, Eigen::Index dim);

/// max |A(m, n)| over m < k <= n: how far A maps z^k H^2 outside itself.
double monomial_invariance_check(const DenseMatrix& a, Eigen::Index k);

struct KernelRank {
  Eigen::Index rank = 0;
  Eigen::VectorXd singular_values;
  double relative_threshold = 1e-10;
};

/// Numeric rank of the Gram matrix of truncated reproducing kernels
/// k_t(z) = sum_{n<dim} t^n z^n. Throws Error(InvalidArgument) on duplicate or
/// out-of-range locations.
KernelRank kernel_span_rank(const std::vector<double>& locations, Eigen::Index dim,
                            double relative_threshold = 1e-10);

/// Expands T_t e_n as (T_t)_{m,n} = C(n+m, m) t^n (1-t)^m, integrates over
/// t in [0, 1] and returns max_m |integral - 1/(n+m+1)| for m < dim.
double hilbert_column_check(Eigen::Index n, Eigen::Index dim,
                            double tolerance = 1e-14);

/// Report record {check, params, deviation_or_defect, tolerance, pass}.
struct CheckReport {
  std::string check;
  nlohmann::ordered_json params;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  nlohmann::ordered_json to_json() const;
};

}  // namespace moment_spectra
