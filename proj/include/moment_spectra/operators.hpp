#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "moment_spectra/error.hpp"
#include "moment_spectra/measure.hpp"
#include "moment_spectra/parallel.hpp"

namespace moment_spectra {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Eigen::Index kDefaultDenseLimit = 4096;
inline constexpr Eigen::Index kCompensatedSumThreshold = 4096;
inline constexpr Eigen::Index kFastConvolutionThreshold = 64;

enum class WeightGenerator { FromMoments, Cesaro, PowerLaw, LeibowitzSquares, Custom };

const char* to_string(WeightGenerator generator);

/// The sequence a_n defining a terraced (Rhaly) matrix.
struct WeightSequence {
  ComplexVector values;
  WeightGenerator generator = WeightGenerator::Custom;
  double parameter = 0.0;  // exponent s for PowerLaw

  Eigen::Index size() const { return values.size(); }

  static WeightSequence cesaro(Eigen::Index n);
  /// a_n = (n+1)^{-s}.
  static WeightSequence power_law(double s, Eigen::Index n);
  /// a_n = n^{-7/8} at perfect squares n >= 1, zero elsewhere (a_0 = 0).
  static WeightSequence leibowitz_squares(Eigen::Index n);
  static WeightSequence from_moments(const MomentSequence& moments);
  static WeightSequence custom(ComplexVector values);
};

/// Lower-triangular matrix with constant rows: entry (m, n) = a_m for n <= m.
class TerracedOperator {
 public:
  TerracedOperator(WeightSequence weights, Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  const WeightSequence& weights() const { return weights_; }
  /// First dim weights.
  auto diagonal() const { return weights_.values.head(dim_); }

 private:
  WeightSequence weights_;
  Eigen::Index dim_;
};

/// Hankel matrix of moments: entry (m, n) = mu_{m+n}.
class HankelMomentOperator {
 public:
  /// Throws Error(InvalidArgument) when fewer than 2*dim-1 moments are given.
  HankelMomentOperator(MomentSequence moments, Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  const MomentSequence& moments() const { return moments_; }

  /// DFT of mu_0..mu_{2dim-2} zero-padded to a power of two >= 2dim-1;
  /// empty below kFastConvolutionThreshold.
  const std::vector<Complex>& circulant_spectrum() const { return spectrum_; }

 private:
  MomentSequence moments_;
  Eigen::Index dim_;
  std::vector<Complex> spectrum_;
};

namespace detail {

/// Neumaier summation applied to real and imaginary parts separately.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_part(sum_re_, c_re_, v.real());
    add_part(sum_im_, c_im_, v.imag());
  }
  Complex value() const { return {sum_re_ + c_re_, sum_im_ + c_im_}; }

 private:
  static void add_part(double& sum, double& c, double v) {
    const double t = sum + v;
    c += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double sum_re_ = 0.0, c_re_ = 0.0, sum_im_ = 0.0, c_im_ = 0.0;
};

inline void check_length(Eigen::Index got, Eigen::Index want) {
  if (got != want) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector length " + std::to_string(got) + " != operator dim " +
                    std::to_string(want));
  }
}

ComplexVector hankel_apply_impl(const HankelMomentOperator& op,
                                const ComplexVector& x);

}  // namespace detail

/// y_n = a_n * sum_{k<=n} x_k, one left-to-right prefix pass.
template <typename Derived>
ComplexVector terraced_apply(const TerracedOperator& op,
                             const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index n = op.dim();
  detail::check_length(x.size(), n);
  const auto& a = op.weights().values;
  ComplexVector y(n);
  if (n > kCompensatedSumThreshold) {
    detail::CompensatedSum prefix;
    for (Eigen::Index i = 0; i < n; ++i) {
      prefix.add(Complex(x(i)));
      y(i) = a(i) * prefix.value();
    }
  } else {
    Complex prefix(0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      prefix += Complex(x(i));
      y(i) = a(i) * prefix;
    }
  }
  return y;
}

/// y_m = sum_{k>=m} conj(a_k) x_k, one right-to-left suffix pass.
template <typename Derived>
ComplexVector terraced_apply_adjoint(const TerracedOperator& op,
                                     const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index n = op.dim();
  detail::check_length(x.size(), n);
  const auto& a = op.weights().values;
  ComplexVector y(n);
  if (n > kCompensatedSumThreshold) {
    detail::CompensatedSum suffix;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      suffix.add(std::conj(a(i)) * Complex(x(i)));
      y(i) = suffix.value();
    }
  } else {
    Complex suffix(0.0);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      suffix += std::conj(a(i)) * Complex(x(i));
      y(i) = suffix;
    }
  }
  return y;
}

/// y_m = sum_n mu_{m+n} x_n. Circulant embedding + FFT above
/// kFastConvolutionThreshold, direct summation below.
template <typename Derived>
ComplexVector hankel_apply(const HankelMomentOperator& op,
                           const Eigen::MatrixBase<Derived>& x) {
  detail::check_length(x.size(), op.dim());
  return detail::hankel_apply_impl(op, x.template cast<Complex>().eval());
}

/// Applies an operator to every column of xs; columns are independent and
/// may be processed concurrently.
template <typename Op, typename ApplyFn>
Eigen::MatrixXcd apply_batch(const Op& op, const Eigen::MatrixXcd& xs,
                             ApplyFn apply) {
  Eigen::MatrixXcd ys(op.dim(), xs.cols());
  parallel_for(static_cast<std::size_t>(xs.cols()), [&](std::size_t j) {
    const auto col = static_cast<Eigen::Index>(j);
    ys.col(col) = apply(op, xs.col(col));
  });
  return ys;
}

DenseMatrix dense(const TerracedOperator& op,
                  Eigen::Index dense_limit = kDefaultDenseLimit);
DenseMatrix dense(const HankelMomentOperator& op,
                  Eigen::Index dense_limit = kDefaultDenseLimit);

/// max |(D_a C - R_a)_{m,n}| over the dim x dim truncation, D_a = diag((n+1) a_n).
double factorization_check(const WeightSequence& weights, Eigen::Index dim);

enum class BoundednessVerdict { Bounded, CompactIndicated, TestInapplicable };

const char* to_string(BoundednessVerdict verdict);

struct BoundednessReport {
  double sup_weight = 0.0;                // sup (n+1)|a_n|
  std::optional<double> limit_estimate;   // lim (n+1)|a_n| when it exists
  std::optional<double> rhaly_norm_bound; // ||D|| + sup sqrt(n(n+1))|a_n|
  BoundednessVerdict verdict = BoundednessVerdict::Bounded;
  double tail_oscillation = 0.0;
};

struct BoundednessOptions {
  double oscillation_tolerance = 1e-3;  // relative to sup_weight
  double compact_tolerance = 1e-3;      // L <= this * sup_weight => compact
};

/// Rhaly boundedness test over the first n_terms weights (n_terms >= 64).
BoundednessReport boundedness_report(const WeightSequence& weights,
                                     Eigen::Index n_terms,
                                     const BoundednessOptions& options = {});

}  // namespace moment_spectra
