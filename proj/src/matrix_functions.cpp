#include "moment_spectra/matrix_functions.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "moment_spectra/error.hpp"

namespace moment_spectra {

namespace {

using Matrix = Eigen::MatrixXcd;

// Padé coefficients b_0..b_m and theta_m from Higham (2005), Table 2.3.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const Matrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Low-degree approximant: U = A * sum_odd b_k A^{k-1}, V = sum_even b_k A^k.
template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix even_power = identity;  // A^{2j}
  Matrix u_inner = Matrix::Zero(n, n);
  Matrix v = Matrix::Zero(n, n);
  for (std::size_t j = 0; 2 * j + 1 < N; ++j) {
    v += b[2 * j] * even_power;
    u_inner += b[2 * j + 1] * even_power;
    even_power = even_power * a2;
  }
  const Matrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

Matrix pade13(const Matrix& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
           b[5] * a4 + b[3] * a2 + b[1] * identity);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * identity;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a, ExpmInfo* info) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "expm needs a square matrix");
  }
  const double norm = one_norm(a);
  ExpmInfo local;
  Matrix result;
  if (norm <= kTheta3) {
    local.pade_degree = 3;
    result = pade_low(a, kPade3);
  } else if (norm <= kTheta5) {
    local.pade_degree = 5;
    result = pade_low(a, kPade5);
  } else if (norm <= kTheta7) {
    local.pade_degree = 7;
    result = pade_low(a, kPade7);
  } else if (norm <= kTheta9) {
    local.pade_degree = 9;
    result = pade_low(a, kPade9);
  } else {
    local.pade_degree = 13;
    local.squarings =
        std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    result = pade13(a / std::ldexp(1.0, local.squarings));
    for (int i = 0; i < local.squarings; ++i) result = result * result;
  }
  if (!result.allFinite()) {
    throw Error(ErrorKind::Overflow, "matrix exponential overflowed");
  }
  if (info != nullptr) *info = local;
  return result;
}

NormEstimate lanczos_largest_eigenvalue(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
    const Eigen::VectorXcd& start, double tolerance, int max_steps) {
  NormEstimate estimate;
  const Eigen::Index n = start.size();
  const Eigen::Index steps = std::min<Eigen::Index>(n, std::max(max_steps, 1));
  Matrix basis(n, steps);
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.col(0) = start.normalized();
  for (Eigen::Index j = 0; j < steps; ++j) {
    Eigen::VectorXcd w = apply(basis.col(j));
    alpha.push_back(basis.col(j).dot(w).real());
    // Two passes of classical Gram-Schmidt keep the basis orthonormal.
    for (int pass = 0; pass < 2; ++pass) {
      const auto q = basis.leftCols(j + 1);
      w -= q * (q.adjoint() * w);
    }
    const double b = w.norm();

    const Eigen::Index k = j + 1;
    const Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
    const Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), k - 1);
    // Ritz vectors are only formed once the top Ritz value has settled.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const double theta = eig.eigenvalues()(k - 1);
    const bool settled = std::abs(theta - estimate.norm) <= tolerance * std::abs(theta);
    estimate.norm = theta;
    estimate.iterations = static_cast<int>(k);
    if (b <= 1e-14 * std::abs(theta) || k == n) {
      estimate.converged = true;
      break;
    }
    if (settled) {
      eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double residual = b * std::abs(eig.eigenvectors()(k - 1, k - 1));
      if (residual <= tolerance * std::abs(theta)) {
        estimate.converged = true;
        break;
      }
    }
    if (j + 1 < steps) {
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
  }
  return estimate;
}

NormEstimate spectral_norm_estimate(const Eigen::MatrixXcd& a,
                                    double tolerance, int max_iterations) {
  const Eigen::Index n = a.cols();
  if (n == 0 || a.squaredNorm() == 0.0) {
    NormEstimate zero;
    zero.converged = true;
    return zero;
  }
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = std::complex<double>(1.0 + 0.5 * std::sin(1.0 + i),
                                0.25 * std::cos(2.0 + i));
  }
  NormEstimate estimate = lanczos_largest_eigenvalue(
      [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return a.adjoint() * (a * x); },
      v, tolerance, max_iterations);
  estimate.norm = std::sqrt(std::max(estimate.norm, 0.0));
  return estimate;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n > 60) return std::exp(log_binomial(n, k));
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<double>(c);
}

}  // namespace moment_spectra
