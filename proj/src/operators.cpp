#include "moment_spectra/operators.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <unsupported/Eigen/FFT>

namespace moment_spectra {

namespace {

// Circular convolution of length >= 2dim-1 leaves the outputs dim-1..2dim-2
// (the only ones used) free of wrap-around terms.
Eigen::Index fft_length(Eigen::Index dim) {
  Eigen::Index length = 1;
  while (length < 2 * dim - 1) length *= 2;
  return length;
}

// Eigen's FFT caches twiddle tables per size; one instance per thread keeps
// them warm without sharing mutable state between threads.
Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

void require_length(Eigen::Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "weight sequence needs length >= 1");
}

void check_dense_limit(Eigen::Index dim, Eigen::Index limit) {
  if (dim > limit) {
    throw Error(ErrorKind::DenseLimitExceeded,
                "dim " + std::to_string(dim) + " exceeds dense limit " +
                    std::to_string(limit));
  }
}

}  // namespace

const char* to_string(WeightGenerator generator) {
  switch (generator) {
    case WeightGenerator::FromMoments: return "FromMoments";
    case WeightGenerator::Cesaro: return "Cesaro";
    case WeightGenerator::PowerLaw: return "PowerLaw";
    case WeightGenerator::LeibowitzSquares: return "LeibowitzSquares";
    case WeightGenerator::Custom: return "Custom";
  }
  return "Unknown";
}

const char* to_string(BoundednessVerdict verdict) {
  switch (verdict) {
    case BoundednessVerdict::Bounded: return "Bounded";
    case BoundednessVerdict::CompactIndicated: return "CompactIndicated";
    case BoundednessVerdict::TestInapplicable: return "TestInapplicable";
  }
  return "Unknown";
}

WeightSequence WeightSequence::cesaro(Eigen::Index n) {
  require_length(n);
  WeightSequence w;
  w.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) w.values(i) = 1.0 / (i + 1.0);
  w.generator = WeightGenerator::Cesaro;
  return w;
}

WeightSequence WeightSequence::power_law(double s, Eigen::Index n) {
  require_length(n);
  WeightSequence w;
  w.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) w.values(i) = std::pow(i + 1.0, -s);
  w.generator = WeightGenerator::PowerLaw;
  w.parameter = s;
  return w;
}

WeightSequence WeightSequence::leibowitz_squares(Eigen::Index n) {
  require_length(n);
  WeightSequence w;
  w.values = ComplexVector::Zero(n);
  for (Eigen::Index k = 1; k * k < n; ++k) {
    w.values(k * k) = std::pow(static_cast<double>(k * k), -7.0 / 8.0);
  }
  w.generator = WeightGenerator::LeibowitzSquares;
  return w;
}

WeightSequence WeightSequence::from_moments(const MomentSequence& moments) {
  require_length(moments.values.size());
  WeightSequence w;
  w.values = moments.values.cast<Complex>();
  w.generator = WeightGenerator::FromMoments;
  return w;
}

WeightSequence WeightSequence::custom(ComplexVector values) {
  require_length(values.size());
  WeightSequence w;
  w.values = std::move(values);
  w.generator = WeightGenerator::Custom;
  return w;
}

TerracedOperator::TerracedOperator(WeightSequence weights, Eigen::Index dim)
    : weights_(std::move(weights)), dim_(dim) {
  if (dim < 1 || weights_.size() < dim) {
    throw Error(ErrorKind::InvalidArgument,
                "terraced operator needs 1 <= dim <= number of weights");
  }
  if (!weights_.values.head(dim).allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "weights must be finite");
  }
}

HankelMomentOperator::HankelMomentOperator(MomentSequence moments,
                                           Eigen::Index dim)
    : moments_(std::move(moments)), dim_(dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dim must be >= 1");
  if (moments_.values.size() < 2 * dim - 1) {
    throw Error(ErrorKind::InvalidArgument,
                "insufficient moments: need " + std::to_string(2 * dim - 1) +
                    ", have " + std::to_string(moments_.values.size()));
  }
  if (dim >= kFastConvolutionThreshold) {
    const Eigen::Index length = fft_length(dim);
    std::vector<Complex> padded(static_cast<std::size_t>(length), Complex(0.0));
    for (Eigen::Index i = 0; i < 2 * dim - 1; ++i) {
      padded[static_cast<std::size_t>(i)] = moments_.values(i);
    }
    thread_fft().fwd(spectrum_, padded);
  }
}

namespace detail {

ComplexVector hankel_apply_impl(const HankelMomentOperator& op,
                                const ComplexVector& x) {
  const Eigen::Index n = op.dim();
  const Eigen::VectorXd& mu = op.moments().values;
  ComplexVector y(n);
  if (n < kFastConvolutionThreshold) {
    for (Eigen::Index m = 0; m < n; ++m) {
      Complex acc(0.0);
      for (Eigen::Index k = 0; k < n; ++k) acc += mu(m + k) * x(k);
      y(m) = acc;
    }
    return y;
  }
  // y_m = sum_k mu_{m+k} x_k = (mu * reverse(x))_{m+n-1}.
  const std::vector<Complex>& spectrum = op.circulant_spectrum();
  const std::size_t length = spectrum.size();
  std::vector<Complex> reversed(length, Complex(0.0));
  for (Eigen::Index k = 0; k < n; ++k) {
    reversed[static_cast<std::size_t>(n - 1 - k)] = x(k);
  }
  Eigen::FFT<double>& fft = thread_fft();
  std::vector<Complex> freq;
  fft.fwd(freq, reversed);
  for (std::size_t i = 0; i < length; ++i) freq[i] *= spectrum[i];
  std::vector<Complex> conv;
  fft.inv(conv, freq);
  for (Eigen::Index m = 0; m < n; ++m) {
    y(m) = conv[static_cast<std::size_t>(m + n - 1)];
  }
  return y;
}

}  // namespace detail

DenseMatrix dense(const TerracedOperator& op, Eigen::Index dense_limit) {
  const Eigen::Index n = op.dim();
  check_dense_limit(n, dense_limit);
  DenseMatrix a = DenseMatrix::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    a.row(m).head(m + 1).setConstant(op.weights().values(m));
  }
  return a;
}

DenseMatrix dense(const HankelMomentOperator& op, Eigen::Index dense_limit) {
  const Eigen::Index n = op.dim();
  check_dense_limit(n, dense_limit);
  const Eigen::VectorXd& mu = op.moments().values;
  DenseMatrix a(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) a(m, k) = mu(m + k);
  }
  return a;
}

double factorization_check(const WeightSequence& weights, Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dim must be >= 1");
  const DenseMatrix cesaro = dense(TerracedOperator(WeightSequence::cesaro(dim), dim));
  ComplexVector scale(dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    scale(n) = (n + 1.0) * weights.values(n);
  }
  const DenseMatrix product = scale.asDiagonal() * cesaro;
  const DenseMatrix terraced = dense(TerracedOperator(weights, dim));
  return (product - terraced).cwiseAbs().maxCoeff();
}

BoundednessReport boundedness_report(const WeightSequence& weights,
                                     Eigen::Index n_terms,
                                     const BoundednessOptions& options) {
  if (n_terms < 64) {
    throw Error(ErrorKind::InvalidArgument, "boundedness_report needs n_terms >= 64");
  }
  if (weights.size() < n_terms) {
    throw Error(ErrorKind::InvalidArgument, "fewer weights than n_terms");
  }
  Eigen::VectorXd scaled(n_terms);
  double sqrt_sup = 0.0;
  for (Eigen::Index n = 0; n < n_terms; ++n) {
    const double mag = std::abs(weights.values(n));
    scaled(n) = (n + 1.0) * mag;
    sqrt_sup = std::max(sqrt_sup, std::sqrt(n * (n + 1.0)) * mag);
  }

  BoundednessReport report;
  report.sup_weight = scaled.maxCoeff();
  const Eigen::Index half = n_terms / 2;
  const auto tail = scaled.segment(half, n_terms - half);
  const double head_sup = scaled.head(half).maxCoeff();
  const double tail_sup = tail.maxCoeff();
  report.tail_oscillation = tail_sup - tail.minCoeff();

  if (report.tail_oscillation < options.oscillation_tolerance * report.sup_weight) {
    // Least squares on (n+1)|a_n| ~ L + c/(n+1) over the tail window.
    const Eigen::Index count = n_terms - half;
    Eigen::MatrixXd design(count, 2);
    for (Eigen::Index i = 0; i < count; ++i) {
      design(i, 0) = 1.0;
      design(i, 1) = 1.0 / (half + i + 1.0);
    }
    const Eigen::VectorXd coef =
        design.colPivHouseholderQr().solve(Eigen::VectorXd(tail));
    report.limit_estimate = std::max(coef(0), 0.0);
    report.verdict =
        *report.limit_estimate <= options.compact_tolerance * report.sup_weight
            ? BoundednessVerdict::CompactIndicated
            : BoundednessVerdict::Bounded;
  } else if (tail_sup > head_sup) {
    report.verdict = BoundednessVerdict::TestInapplicable;
  } else {
    report.verdict = BoundednessVerdict::Bounded;
  }
  if (report.verdict != BoundednessVerdict::TestInapplicable) {
    report.rhaly_norm_bound = report.sup_weight + sqrt_sup;
  }
  return report;
}

}  // namespace moment_spectra
