#pragma once

#include <functional>

#include <Eigen/Core>

namespace moment_spectra {

struct ExpmInfo {
  int pade_degree = 0;
  int squarings = 0;
};

/// exp(A) by scaling and squaring with a diagonal Padé approximant of degree
/// 3, 5, 7, 9 or 13, chosen from the 1-norm so that the backward error is at
/// unit-roundoff level (Higham's theta_m bounds).
/// Throws Error(Overflow) if the result is not finite.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a, ExpmInfo* info = nullptr);

struct NormEstimate {
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest eigenvalue of a Hermitian positive semidefinite operator given by
/// its action, via Lanczos with full reorthogonalization. Stops when the Ritz
/// residual falls below tolerance * theta or the Krylov space is exhausted.
/// `iterations` in the result counts Lanczos steps; `norm` holds theta.
NormEstimate lanczos_largest_eigenvalue(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
    const Eigen::VectorXcd& start, double tolerance, int max_steps);

/// ||A||_2 by Lanczos on A^* A from a fixed deterministic start.
NormEstimate spectral_norm_estimate(const Eigen::MatrixXcd& a,
                                    double tolerance = 1e-12,
                                    int max_iterations = 10000);

/// Binomial coefficient as a double: exact integer arithmetic for n <= 60,
/// log-Gamma above.
double binomial(int n, int k);

/// log C(n, k) via log-Gamma.
double log_binomial(int n, int k);

}  // namespace moment_spectra
