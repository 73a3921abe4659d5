#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "moment_spectra/measure.hpp"
#include "moment_spectra/operators.hpp"

namespace moment_spectra {

enum class L2Verdict { InL2, NotInL2, Inconclusive };
enum class ClassifyMethod { Analytic, NumericFit };

/// Which path classify_eigenvalue may take. Auto prefers the analytic
/// exponent and falls back to the numeric fit near the l2 boundary.
enum class ClassifyMode { Auto, Analytic, NumericFit };

const char* to_string(L2Verdict verdict);
const char* to_string(ClassifyMethod method);

struct ClassificationVerdict {
  std::size_t eigenvalue_index = 0;
  double mu_k = 0.0;
  L2Verdict verdict = L2Verdict::Inconclusive;
  double slope = 0.0;  // power-law exponent of mu_n exp(s_n / mu_k)
  ClassifyMethod method = ClassifyMethod::NumericFit;
};

struct ClassifyOptions {
  ClassifyMode mode = ClassifyMode::Auto;
  double margin = 0.1;                  // |slope + 1/2| needed for a verdict
  double distinct_tolerance = 1e-12;    // relative to mu_0
  double growth_residual_limit = 1e-3;  // growth fit counted as conclusive
};

/// Decides whether mu_k is an eigenvalue of the terraced operator R_mu, i.e.
/// whether (mu_n exp(s_n / mu_k))_n is square summable. Works in log space.
/// Throws Error(DegenerateAtZero) or Error(DuplicateMoments).
ClassificationVerdict classify_eigenvalue(const MomentSequence& moments,
                                          const GrowthEstimate& growth,
                                          std::size_t k,
                                          const ClassifyOptions& options = {});

/// JSON object {k, mu_k, verdict, slope, method}.
std::string verdict_json(const ClassificationVerdict& verdict);

struct EigenvectorResult {
  ComplexVector x;
  double log_scale = 0.0;        // true vector = x * exp(log_scale)
  double tail_magnitude = 0.0;   // |x_{dim-1}| (scaled)
};

/// Eigenvector of R_mu for mu_k: x_j = 0 (j < k), x_k = 1,
/// x_{n+1} = mu_{n+1} mu_k / (mu_n (mu_k - mu_{n+1})) x_n.
/// Renormalizes whenever |x_n| exceeds 1e150.
/// Throws Error(DivisionBlowUp) when |mu_k - mu_{n+1}| < 1e-14.
EigenvectorResult eigenvector(const MomentSequence& moments, std::size_t k,
                              Eigen::Index dim);

struct EigenResidual {
  double head = 0.0;   // ||R_N x - mu_k x|| / ||x||, N = dim
  double tail = 0.0;   // rows n >= dim of R applied to x padded with zeros
  double total = 0.0;
};

/// Residual of an eigenvector candidate. The tail part uses every available
/// moment beyond dim (n_terms must exceed dim).
EigenResidual eigenvector_residual(const MomentSequence& moments,
                                   std::size_t k, const ComplexVector& x);

/// Eigenvector of R_mu^* for lambda = 1/nu: x_0 = 1,
/// x_n = x_{n-1} (1 - mu_{n-1} nu). Throws Error(InvalidArgument) for nu = 0.
ComplexVector adjoint_eigenvector(const MomentSequence& moments, Complex nu,
                                  Eigen::Index dim);

/// Predicted spectrum: a point set plus an optional closed disc with
/// center == radius on the positive real axis.
struct SpectralRegion {
  std::vector<Complex> points;
  std::optional<double> disc_center;
  std::optional<double> disc_radius;
  bool open_disc = false;

  bool contains(Complex z, double tolerance = 0.0) const;
};

/// Disc {|z - beta| < beta} of guaranteed adjoint eigenvalues, where
/// s_n ~ beta log n (so gamma = 1/beta). None when s_n is bounded.
std::optional<SpectralRegion> adjoint_disc(const GrowthEstimate& growth);

/// sigma(R_a) = a U {|z - L| <= L}; L = 0 collapses the disc to {0}.
/// Throws Error(HypothesesNotMet) unless the weights are positive, pairwise
/// distinct and the report carries a limit.
SpectralRegion spectrum_region(const WeightSequence& weights,
                               const BoundednessReport& report,
                               Eigen::Index n_points);

struct ComplexWindow {
  double re_min = 0.0, re_max = 1.0, im_min = 0.0, im_max = 1.0;
};

struct PseudospectrumGrid {
  ComplexWindow window;
  int resolution = 0;
  Eigen::MatrixXd sigma_min;  // (im index, re index), row-major by imaginary part

  Complex point(int im_index, int re_index) const;
};

inline constexpr Eigen::Index kFullSvdLimit = 512;

/// Smallest singular value of zI - A. Full SVD up to kFullSvdLimit; above (or
/// when forced) inverse iteration as Lanczos on ((zI - A)^*(zI - A))^{-1}.
double sigma_min(const DenseMatrix& a, Complex z, bool force_inverse_iteration = false);

PseudospectrumGrid pseudospectrum_grid(const DenseMatrix& a,
                                       const ComplexWindow& window,
                                       int resolution);

/// Grid for a structured operator truncated at op.dim(); the dense limit
/// guards the materialization.
template <typename StructuredOp>
PseudospectrumGrid pseudospectrum_grid(const StructuredOp& op,
                                       const ComplexWindow& window,
                                       int resolution,
                                       Eigen::Index dense_limit = kDefaultDenseLimit) {
  return pseudospectrum_grid(dense(op, dense_limit), window, resolution);
}

/// CSV with header "re,im,sigma_min", rows ordered by imaginary part then real.
std::string pseudospectrum_csv(const PseudospectrumGrid& grid);

}  // namespace moment_spectra
