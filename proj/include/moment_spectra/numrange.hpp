#pragma once

#include <string>
#include <vector>

#include "moment_spectra/operators.hpp"

namespace moment_spectra {

/// Smallest eigenvalue of the Hermitian part (A + A^*)/2.
/// Throws Error(NonConvergence) if the eigensolver fails.
double hermitian_min_eig(const DenseMatrix& a);

/// Field-of-values estimate from the support function
/// h(theta) = lambda_max(Re(e^{i theta} A)).
struct FovResult {
  std::vector<double> thetas;
  std::vector<Complex> boundary_points;  // <A v, v> for the extreme eigenvector v
  std::vector<double> support_values;    // h(theta)
  double min_real_part = 0.0;            // -h(pi)
  Eigen::Index dim = 0;
};

inline constexpr int kDefaultAngles = 256;

/// Support-function rotation over n_angles uniform angles in [0, 2 pi).
/// The boundary polygon is an inner approximation of the convex set W(A).
FovResult fov_boundary(const DenseMatrix& a, int n_angles = kDefaultAngles);

/// h(theta) for a single angle.
double support_function(const DenseMatrix& a, double theta);

/// CSV with header "theta,re,im,h".
std::string fov_csv(const FovResult& fov);

struct ContractionResult {
  std::vector<double> taus;
  std::vector<double> norms;  // ||exp(-tau A)||_2, same order as taus
  double max_norm = 0.0;
};

/// ||exp(-tau A)||_2 for every tau; scaling-and-squaring exponential plus
/// power-iteration norm estimate.
ContractionResult contraction_check(const DenseMatrix& a,
                                    const std::vector<double>& taus);

/// JSON list [{tau, norm}, ...].
std::string contraction_json(const ContractionResult& result);

}  // namespace moment_spectra
