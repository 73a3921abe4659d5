#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "moment_spectra/error.hpp"
#include "moment_spectra/matrix_functions.hpp"
#include "oracles.hpp"

using namespace moment_spectra;
using Complex = std::complex<double>;

namespace {

Eigen::MatrixXcd random_matrix(Eigen::Index n, double scale, std::mt19937_64& rng) {
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = oracle::random_vector(n, rng);
  return a * (scale / a.cwiseAbs().colwise().sum().maxCoeff());
}

double relative(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  return (got - want).norm() / want.norm();
}

}  // namespace

TEST_CASE("expm of simple matrices") {
  CHECK(expm(Eigen::MatrixXcd::Zero(4, 4)).isIdentity(0.0));
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d.diagonal() << -1.0, 0.5, Complex(0, std::numbers::pi);
  const Eigen::MatrixXcd e = expm(d);
  CHECK(std::abs(e(0, 0) - std::exp(-1.0)) <= 1e-15);
  CHECK(std::abs(e(1, 1) - std::exp(0.5)) <= 1e-15);
  CHECK(std::abs(e(2, 2) + 1.0) <= 1e-15);

  // Nilpotent: exp(N) = I + N.
  Eigen::MatrixXcd nil = Eigen::MatrixXcd::Zero(2, 2);
  nil(0, 1) = 3.0;
  const Eigen::MatrixXcd en = expm(nil);
  CHECK(std::abs(en(0, 1) - 3.0) <= 1e-15);
  CHECK(std::abs(en(0, 0) - 1.0) <= 1e-15);
}

TEST_CASE("expm agrees with an independent implementation across norm scales") {
  std::mt19937_64 rng(23);
  for (double scale : {1e-4, 0.01, 0.2, 1.0, 2.5, 5.0, 40.0, 400.0}) {
    CAPTURE(scale);
    const Eigen::MatrixXcd a = random_matrix(12, scale, rng) - scale * Eigen::MatrixXcd::Identity(12, 12);
    ExpmInfo info;
    const Eigen::MatrixXcd mine = expm(a, &info);
    const Eigen::MatrixXcd theirs = a.exp();
    CHECK(relative(mine, theirs) <= 1e-12);
    if (scale <= 0.01) CHECK(info.squarings == 0);
    if (scale >= 40.0) CHECK(info.pade_degree == 13);
  }
}

TEST_CASE("expm semigroup identity exp(2A) = exp(A)^2") {
  std::mt19937_64 rng(29);
  const Eigen::MatrixXcd a = random_matrix(10, 3.0, rng);
  const Eigen::MatrixXcd e1 = expm(a);
  CHECK(relative(expm(2.0 * a), e1 * e1) <= 1e-12);
}

TEST_CASE("expm overflow is reported") {
  const Eigen::MatrixXcd big = 1000.0 * Eigen::MatrixXcd::Identity(2, 2);
  try {
    expm(big);
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("spectral norm estimate matches the SVD") {
  std::mt19937_64 rng(31);
  for (Eigen::Index n : {1, 2, 7, 40, 120}) {
    const Eigen::MatrixXcd a = random_matrix(n, 2.0, rng);
    const NormEstimate est = spectral_norm_estimate(a);
    CHECK(est.converged);
    CHECK(std::abs(est.norm - oracle::spectral_norm(a)) <= 1e-10 * oracle::spectral_norm(a));
  }
  const NormEstimate zero = spectral_norm_estimate(Eigen::MatrixXcd::Zero(5, 5));
  CHECK(zero.norm == 0.0);
  // Unitary matrices have norm 1.
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(random_matrix(30, 1.0, rng)).householderQ();
  CHECK(std::abs(spectral_norm_estimate(q).norm - 1.0) <= 1e-12);
}

TEST_CASE("binomial coefficients") {
  for (unsigned n = 0; n <= 60; ++n)
    for (unsigned k = 0; k <= n; ++k)
      CHECK(binomial(static_cast<int>(n), static_cast<int>(k)) ==
            static_cast<double>(oracle::choose(n, k)));
  CHECK(binomial(5, 7) == 0.0);
  CHECK(binomial(100, 50) == doctest::Approx(1.0089134454556419e29).epsilon(1e-12));
  CHECK(log_binomial(100, 50) == doctest::Approx(std::log(1.0089134454556419e29)).epsilon(1e-13));
}
