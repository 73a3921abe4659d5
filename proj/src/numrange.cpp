#include "moment_spectra/numrange.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "moment_spectra/error.hpp"
#include "moment_spectra/format.hpp"
#include "moment_spectra/matrix_functions.hpp"
#include "moment_spectra/parallel.hpp"

namespace moment_spectra {

namespace {

using Solver = Eigen::SelfAdjointEigenSolver<DenseMatrix>;

void require_square(const DenseMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "matrix must be square and non-empty");
  }
}

Solver rotated_hermitian_part(const DenseMatrix& a, double theta, bool vectors) {
  const Complex phase = std::polar(1.0, theta);
  const DenseMatrix rotated = phase * a;
  const DenseMatrix h = 0.5 * (rotated + rotated.adjoint());
  Solver solver(h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergence,
                "Hermitian eigensolver did not converge (dim " +
                    std::to_string(a.rows()) + ")");
  }
  return solver;
}

}  // namespace

double hermitian_min_eig(const DenseMatrix& a) {
  require_square(a);
  return rotated_hermitian_part(a, 0.0, false).eigenvalues()(0);
}

double support_function(const DenseMatrix& a, double theta) {
  require_square(a);
  const Solver solver = rotated_hermitian_part(a, theta, false);
  return solver.eigenvalues()(a.rows() - 1);
}

FovResult fov_boundary(const DenseMatrix& a, int n_angles) {
  require_square(a);
  if (n_angles < 4) {
    throw Error(ErrorKind::InvalidArgument, "n_angles must be >= 4");
  }
  const auto count = static_cast<std::size_t>(n_angles);
  FovResult fov;
  fov.dim = a.rows();
  fov.thetas.resize(count);
  fov.boundary_points.resize(count);
  fov.support_values.resize(count);
  parallel_for(count, [&](std::size_t j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / n_angles;
    const Solver solver = rotated_hermitian_part(a, theta, true);
    const Eigen::Index top = a.rows() - 1;
    const ComplexVector v = solver.eigenvectors().col(top);
    fov.thetas[j] = theta;
    fov.support_values[j] = solver.eigenvalues()(top);
    fov.boundary_points[j] = v.dot(a * v);  // v^* A v
  });
  fov.min_real_part = -support_function(a, std::numbers::pi);
  return fov;
}

std::string fov_csv(const FovResult& fov) {
  std::string out = "theta,re,im,h\n";
  for (std::size_t j = 0; j < fov.thetas.size(); ++j) {
    out += format_double(fov.thetas[j]) + "," +
           format_double(fov.boundary_points[j].real()) + "," +
           format_double(fov.boundary_points[j].imag()) + "," +
           format_double(fov.support_values[j]) + "\n";
  }
  return out;
}

ContractionResult contraction_check(const DenseMatrix& a,
                                    const std::vector<double>& taus) {
  require_square(a);
  if (taus.empty()) throw Error(ErrorKind::InvalidArgument, "taus must be nonempty");
  ContractionResult result;
  result.taus = taus;
  result.norms.resize(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) {
    if (!(taus[i] > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "taus must be positive");
    }
    const DenseMatrix e = expm(-taus[i] * a);
    result.norms[i] = spectral_norm_estimate(e).norm;
  });
  for (double n : result.norms) result.max_norm = std::max(result.max_norm, n);
  return result;
}

std::string contraction_json(const ContractionResult& result) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result.taus.size(); ++i) {
    nlohmann::ordered_json item;
    item["tau"] = result.taus[i];
    item["norm"] = result.norms[i];
    list.push_back(item);
  }
  return list.dump(2);
}

}  // namespace moment_spectra
