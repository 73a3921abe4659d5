#include "moment_spectra/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <json.hpp>

#include "moment_spectra/error.hpp"
#include "moment_spectra/format.hpp"
#include "moment_spectra/matrix_functions.hpp"
#include "moment_spectra/parallel.hpp"

namespace moment_spectra {

namespace {

constexpr double kOverflowGuard = 1e150;

struct LineFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  std::size_t points = 0;
};

// Least-squares slope of log|mu_n exp(s_n / mu_k)| against log(n+1) over the
// upper half of the positive (non-underflowed) range.
LineFit fit_log_term(const MomentSequence& moments, double mu_k) {
  const auto n_terms = static_cast<Eigen::Index>(moments.n_terms());
  Eigen::Index last_positive = -1;
  for (Eigen::Index n = n_terms - 1; n >= 0; --n) {
    if (moments.values(n) > 0.0) {
      last_positive = n;
      break;
    }
  }
  Eigen::Index lo = n_terms / 2;
  Eigen::Index hi = n_terms;  // exclusive
  if (last_positive < 0) return {};
  if (last_positive < lo + 8) {
    lo = last_positive / 2;
    hi = last_positive + 1;
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (Eigen::Index n = lo; n < hi; ++n) {
    const double mu = moments.values(n);
    if (!(mu > 0.0)) continue;
    xs.push_back(std::log(n + 1.0));
    ys.push_back(std::log(mu) + moments.partial_sums(n) / mu_k);
  }
  LineFit fit;
  fit.points = xs.size();
  if (xs.size() < 2) return fit;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  return fit;
}

L2Verdict threshold(double exponent, double margin) {
  if (!std::isfinite(exponent) && !std::isnan(exponent)) {
    return exponent < 0 ? L2Verdict::InL2 : L2Verdict::NotInL2;
  }
  if (std::isnan(exponent)) return L2Verdict::Inconclusive;
  if (exponent < -0.5 - margin) return L2Verdict::InL2;
  if (exponent > -0.5 + margin) return L2Verdict::NotInL2;
  return L2Verdict::Inconclusive;
}

void check_eigen_preconditions(const MomentSequence& moments, std::size_t k,
                               double distinct_tolerance) {
  if (moments.degenerate) {
    throw Error(ErrorKind::DegenerateAtZero,
                "measure is concentrated at 0 (R_mu f = lambda f(0))");
  }
  if (k >= moments.n_terms()) {
    throw Error(ErrorKind::InvalidArgument, "k must be < n_terms");
  }
  const Eigen::VectorXd& mu = moments.values;
  if ((mu.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidArgument, "moments must be nonnegative");
  }
  const auto ki = static_cast<Eigen::Index>(k);
  if (!(mu(ki) > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "mu_k must be positive");
  }
  const double gap = distinct_tolerance * mu(0);
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    if (j != ki && std::abs(mu(j) - mu(ki)) <= gap) {
      throw Error(ErrorKind::DuplicateMoments,
                  "mu_" + std::to_string(j) + " and mu_" + std::to_string(k) +
                      " are not distinct");
    }
  }
}

}  // namespace

const char* to_string(L2Verdict verdict) {
  switch (verdict) {
    case L2Verdict::InL2: return "InL2";
    case L2Verdict::NotInL2: return "NotInL2";
    case L2Verdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

const char* to_string(ClassifyMethod method) {
  return method == ClassifyMethod::Analytic ? "Analytic" : "NumericFit";
}

ClassificationVerdict classify_eigenvalue(const MomentSequence& moments,
                                          const GrowthEstimate& growth,
                                          std::size_t k,
                                          const ClassifyOptions& options) {
  check_eigen_preconditions(moments, k, options.distinct_tolerance);
  const double mu_k = moments.values(static_cast<Eigen::Index>(k));

  ClassificationVerdict result;
  result.eigenvalue_index = k;
  result.mu_k = mu_k;

  const bool conclusive =
      growth.bounded || growth.fit_residual < options.growth_residual_limit;
  // With s_n ~ beta log n, mu_n ~ beta / n and the term behaves like
  // n^{-1 + beta / mu_k}. Bounded s_n leaves mu_n, which is square summable.
  const double exponent = -1.0 + growth.beta / mu_k;

  const bool use_analytic =
      options.mode == ClassifyMode::Analytic ||
      (options.mode == ClassifyMode::Auto && conclusive &&
       (growth.bounded || std::abs(exponent + 0.5) > options.margin));

  if (use_analytic) {
    result.method = ClassifyMethod::Analytic;
    if (growth.bounded) {
      result.verdict = L2Verdict::InL2;
      result.slope = fit_log_term(moments, mu_k).slope;
    } else {
      result.verdict = exponent < -0.5 ? L2Verdict::InL2 : L2Verdict::NotInL2;
      result.slope = exponent;
    }
    return result;
  }

  result.method = ClassifyMethod::NumericFit;
  const LineFit fit = fit_log_term(moments, mu_k);
  result.slope = fit.slope;
  result.verdict = threshold(fit.slope, options.margin);
  return result;
}

std::string verdict_json(const ClassificationVerdict& verdict) {
  nlohmann::ordered_json j;
  j["k"] = verdict.eigenvalue_index;
  j["mu_k"] = verdict.mu_k;
  j["verdict"] = to_string(verdict.verdict);
  if (std::isfinite(verdict.slope)) {
    j["slope"] = verdict.slope;
  } else {
    j["slope"] = nullptr;
  }
  j["method"] = to_string(verdict.method);
  return j.dump();
}

EigenvectorResult eigenvector(const MomentSequence& moments, std::size_t k,
                              Eigen::Index dim) {
  check_eigen_preconditions(moments, k, 0.0);
  if (dim < 1 || dim > static_cast<Eigen::Index>(moments.n_terms())) {
    throw Error(ErrorKind::InvalidArgument, "dim must be in [1, n_terms]");
  }
  const auto ki = static_cast<Eigen::Index>(k);
  const Eigen::VectorXd& mu = moments.values;
  const double mu_k = mu(ki);

  EigenvectorResult result;
  result.x = ComplexVector::Zero(dim);
  if (ki >= dim) return result;
  result.x(ki) = 1.0;
  for (Eigen::Index n = ki; n + 1 < dim; ++n) {
    const double denom = mu_k - mu(n + 1);
    if (std::abs(denom) < 1e-14) {
      throw Error(ErrorKind::DivisionBlowUp,
                  "|mu_k - mu_" + std::to_string(n + 1) + "| < 1e-14");
    }
    if (mu(n) == 0.0 || mu(n + 1) == 0.0) {
      result.x(n + 1) = 0.0;
      continue;
    }
    result.x(n + 1) = (mu(n + 1) / mu(n)) * (mu_k / denom) * result.x(n);
    if (std::abs(result.x(n + 1)) > kOverflowGuard) {
      result.x /= kOverflowGuard;
      result.log_scale += std::log(kOverflowGuard);
    }
  }
  result.tail_magnitude = std::abs(result.x(dim - 1));
  return result;
}

EigenResidual eigenvector_residual(const MomentSequence& moments,
                                   std::size_t k, const ComplexVector& x) {
  const Eigen::Index dim = x.size();
  const auto n_terms = static_cast<Eigen::Index>(moments.n_terms());
  if (dim < 1 || dim > n_terms) {
    throw Error(ErrorKind::InvalidArgument, "vector longer than moment sequence");
  }
  const double mu_k = moments.values(static_cast<Eigen::Index>(k));
  const double x_norm = x.norm();
  EigenResidual r;
  if (x_norm == 0.0) return r;

  const TerracedOperator op(WeightSequence::from_moments(moments), dim);
  const ComplexVector rx = terraced_apply(op, x);
  r.head = (rx - mu_k * x).norm() / x_norm;

  const Complex total = x.sum();
  const double tail_mass = moments.values.segment(dim, n_terms - dim).squaredNorm();
  r.tail = std::abs(total) * std::sqrt(tail_mass) / x_norm;
  r.total = std::hypot(r.head, r.tail);
  return r;
}

ComplexVector adjoint_eigenvector(const MomentSequence& moments, Complex nu,
                                  Eigen::Index dim) {
  if (nu == Complex(0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "nu must be nonzero (lambda = 0 has only the trivial solution)");
  }
  if (dim < 1 || dim > static_cast<Eigen::Index>(moments.n_terms())) {
    throw Error(ErrorKind::InvalidArgument, "dim must be in [1, n_terms]");
  }
  ComplexVector x(dim);
  x(0) = 1.0;
  for (Eigen::Index n = 1; n < dim; ++n) {
    x(n) = x(n - 1) * (1.0 - moments.values(n - 1) * nu);
  }
  return x;
}

bool SpectralRegion::contains(Complex z, double tolerance) const {
  for (const Complex& p : points) {
    if (std::abs(z - p) <= tolerance) return true;
  }
  if (disc_center && disc_radius) {
    const double d = std::abs(z - Complex(*disc_center, 0.0));
    return open_disc ? d < *disc_radius + tolerance
                     : d <= *disc_radius + tolerance;
  }
  return false;
}

std::optional<SpectralRegion> adjoint_disc(const GrowthEstimate& growth) {
  if (growth.bounded || !(growth.beta > 0.0)) return std::nullopt;
  SpectralRegion region;
  region.disc_center = growth.beta;
  region.disc_radius = growth.beta;
  region.open_disc = true;
  return region;
}

SpectralRegion spectrum_region(const WeightSequence& weights,
                               const BoundednessReport& report,
                               Eigen::Index n_points) {
  if (n_points < 1 || n_points > weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "n_points out of range");
  }
  std::vector<double> sorted;
  sorted.reserve(static_cast<std::size_t>(n_points));
  for (Eigen::Index n = 0; n < n_points; ++n) {
    const Complex a = weights.values(n);
    if (a.imag() != 0.0 || !(a.real() > 0.0)) {
      throw Error(ErrorKind::HypothesesNotMet,
                  "weights must be positive (a_" + std::to_string(n) + ")");
    }
    sorted.push_back(a.real());
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::HypothesesNotMet, "weights must be pairwise distinct");
  }
  if (!report.limit_estimate) {
    throw Error(ErrorKind::HypothesesNotMet, "lim (n+1) a_n does not exist");
  }

  SpectralRegion region;
  for (Eigen::Index n = 0; n < n_points; ++n) {
    region.points.push_back(weights.values(n));
  }
  const double limit = *report.limit_estimate;
  if (report.verdict == BoundednessVerdict::CompactIndicated || limit == 0.0) {
    region.points.emplace_back(0.0, 0.0);
  } else {
    region.disc_center = limit;
    region.disc_radius = limit;
  }
  return region;
}

double sigma_min(const DenseMatrix& a, Complex z, bool force_inverse_iteration) {
  const Eigen::Index n = a.rows();
  DenseMatrix b = -a;
  b.diagonal().array() += z;
  if (n <= kFullSvdLimit && !force_inverse_iteration) {
    Eigen::BDCSVD<DenseMatrix> svd(b);
    return svd.singularValues().minCoeff();
  }
  // Lanczos on (B^* B)^{-1} = B^{-1} B^{-*}, applied through one LU factorization.
  const Eigen::PartialPivLU<DenseMatrix> lu(b);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Complex(1.0 + 0.5 * std::sin(3.0 + i), 0.5 * std::cos(1.0 + 2.0 * i));
  }
  bool finite = true;
  const NormEstimate estimate = lanczos_largest_eigenvalue(
      [&](const ComplexVector& x) -> ComplexVector {
        ComplexVector w = lu.solve(lu.adjoint().solve(x));
        if (!w.allFinite()) {
          finite = false;
          w.setZero();
        }
        return w;
      },
      v, 1e-13, 1000);
  if (!finite || !std::isfinite(estimate.norm)) return 0.0;
  return estimate.norm > 0.0 ? 1.0 / std::sqrt(estimate.norm) : 0.0;
}

Complex PseudospectrumGrid::point(int im_index, int re_index) const {
  const double step_re = (window.re_max - window.re_min) / (resolution - 1);
  const double step_im = (window.im_max - window.im_min) / (resolution - 1);
  return {window.re_min + re_index * step_re, window.im_min + im_index * step_im};
}

PseudospectrumGrid pseudospectrum_grid(const DenseMatrix& a,
                                       const ComplexWindow& window,
                                       int resolution) {
  if (resolution < 2) {
    throw Error(ErrorKind::InvalidArgument, "resolution must be >= 2");
  }
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix must be square");
  }
  PseudospectrumGrid grid;
  grid.window = window;
  grid.resolution = resolution;
  grid.sigma_min.resize(resolution, resolution);
  const auto count = static_cast<std::size_t>(resolution) * resolution;
  parallel_for(count, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / resolution);
    const int j = static_cast<int>(idx % resolution);
    grid.sigma_min(i, j) = sigma_min(a, grid.point(i, j));
  });
  return grid;
}

std::string pseudospectrum_csv(const PseudospectrumGrid& grid) {
  std::string out = "re,im,sigma_min\n";
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      const Complex z = grid.point(i, j);
      out += format_double(z.real()) + "," + format_double(z.imag()) + "," +
             format_double(grid.sigma_min(i, j)) + "\n";
    }
  }
  return out;
}

}  // namespace moment_spectra
