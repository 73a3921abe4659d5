#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "moment_spectra/error.hpp"
#include "moment_spectra/invariance.hpp"
#include "moment_spectra/measure.hpp"
#include "moment_spectra/operators.hpp"
#include "oracles.hpp"

using namespace moment_spectra;

TEST_CASE("composition matrix of the flow") {
  CHECK((composition_matrix_phi(0.0, 12) - DenseMatrix::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);

  const DenseMatrix far = composition_matrix_phi(60.0, 10);
  for (Eigen::Index n = 0; n < 10; ++n) {
    CHECK(std::abs(far(0, n) - 1.0) <= 1e-14);
    CHECK(far.col(n).tail(9).cwiseAbs().maxCoeff() <= 1e-14);
  }

  // Column n holds the coefficients of phi_t(z)^n; compare against
  // polynomial multiplication.
  const double t = 0.7, a = std::exp(-t), b = 1.0 - a;
  const DenseMatrix m = composition_matrix_phi(t, 8);
  Eigen::VectorXd power = Eigen::VectorXd::Zero(8);
  power(0) = 1.0;
  for (Eigen::Index n = 0; n < 8; ++n) {
    for (Eigen::Index k = 0; k < 8; ++k) CHECK(std::abs(m(k, n).real() - power(k)) <= 1e-15);
    Eigen::VectorXd next = b * power;
    next.tail(7) += a * power.head(7);
    power = next;
  }
  CHECK(m.isUpperTriangular(0.0));
}

TEST_CASE("property: truncated semigroup law is exact") {
  const DenseMatrix ms = composition_matrix_phi(0.3, 32);
  const DenseMatrix mt = composition_matrix_phi(0.9, 32);
  CHECK((ms * mt - composition_matrix_phi(1.2, 32)).cwiseAbs().maxCoeff() <= 1e-13);
  for (double s : {0.0, 0.5, 2.0})
    for (double u : {0.1, 1.0, 2.0})
      for (Eigen::Index dim : {8, 64}) {
        const DenseMatrix lhs = composition_matrix_phi(s, dim) * composition_matrix_phi(u, dim);
        CHECK((lhs - composition_matrix_phi(s + u, dim)).cwiseAbs().maxCoeff() <= 1e-13);
      }
}

TEST_CASE("large-index binomials stay finite") {
  const DenseMatrix m = composition_matrix_phi(0.05, 200);
  CHECK(m.allFinite());
  // Columns sum to phi_t(1)^n = 1.
  for (Eigen::Index n : {0, 61, 150, 199}) CHECK(std::abs(m.col(n).sum() - 1.0) <= 1e-12);
}

TEST_CASE("W_t is the terraced operator with weights t^m") {
  for (double t : {0.0, 0.3, 0.9}) {
    Eigen::VectorXcd w(40);
    for (int m = 0; m < 40; ++m) w(m) = std::pow(t, m);
    CHECK((wt_matrix(t, 40) - oracle::terraced(w, 40)).cwiseAbs().maxCoeff() <= 1e-15);
    // Equal to the Rhaly operator of the point mass at t.
    if (t > 0.0) {
      const DenseMatrix r = dense(TerracedOperator(
          WeightSequence::from_moments(moments(parse_measure("dirac(" + std::to_string(t) + ")"), 40)), 40));
      CHECK((wt_matrix(t, 40) - r).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }
}

TEST_CASE("V_t is the Hankel operator of the point mass") {
  const double t = 0.5;
  const DenseMatrix v = vt_matrix(t, 30);
  const DenseMatrix h = dense(HankelMomentOperator(moments(parse_measure("dirac(0.5)"), 59), 30));
  CHECK((v - h).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("property: rank-1 positivity of the point-mass Hankel form") {
  std::mt19937_64 rng(43);
  for (double t : {0.2, 0.5, 0.9}) {
    const DenseMatrix v = vt_matrix(t, 40);
    for (int trial = 0; trial < 100; ++trial) {
      PowerSeriesVector f{oracle::random_vector(40, rng)};
      const Complex form = f.coefficients.dot(v * f.coefficients);
      const double value = std::norm(f.evaluate(t));
      CHECK(std::abs(form.imag()) <= 1e-12 * std::max(1.0, value));
      CHECK(std::abs(form.real() - value) <= 1e-12 * std::max(1.0, value));
    }
  }
}

TEST_CASE("power series vectors") {
  PowerSeriesVector f{(ComplexVector(3) << 1.0, 2.0, Complex(0, 1)).finished()};
  CHECK(f.dim() == 3);
  CHECK(f.norm() == doctest::Approx(std::sqrt(6.0)));
  CHECK(std::abs(f.evaluate(0.5) - Complex(2.0, 0.25)) <= 1e-15);
}

TEST_CASE("integral representation of the Cesaro adjoint") {
  const Eigen::MatrixXd integral = integrated_composition_matrix(33);
  CHECK(std::abs(integral(0, 0) - 1.0) <= 1e-14);
  CHECK(std::abs(integral(0, 1) - 0.5) <= 1e-12);
  CHECK(std::abs(integral(1, 1) - 0.5) <= 1e-12);
  // Beta identity C(n,m) m!(n-m)!/(n+1)! = 1/(n+1), checked in integers.
  for (unsigned n = 0; n <= 19; ++n)
    for (unsigned m = 0; m <= n; ++m) {
      const std::uint64_t num = oracle::choose(n, m) * oracle::factorial(m) * oracle::factorial(n - m);
      CHECK(num * (n + 1) == oracle::factorial(n + 1));
      CHECK(std::abs(integral(m, n) - 1.0 / (n + 1)) <= 1e-12);
    }
  for (Eigen::Index n = 0; n < 33; ++n)
    for (Eigen::Index m = n + 1; m < 33; ++m) CHECK(integral(m, n) == 0.0);
  CHECK(cesaro_adjoint_integral_check(32) <= 1e-11);
  CHECK(cesaro_adjoint_integral_check(1) <= 1e-14);
}

TEST_CASE("integral representation of Rhaly adjoints") {
  CHECK(std::abs(rhaly_adjoint_integral_check(WeightSequence::cesaro(32), 32) -
                 cesaro_adjoint_integral_check(32)) <= 1e-15);
  CHECK(rhaly_adjoint_integral_check(WeightSequence::power_law(2.0, 32), 32) <= 1e-12);
  CHECK(rhaly_adjoint_integral_check(WeightSequence::custom(ComplexVector::Zero(16)), 16) == 0.0);
  const ComplexVector complex_weights =
      (ComplexVector(4) << Complex(1, 1), Complex(0, 0.5), Complex(0.2, -0.1), Complex(-0.3, 0)).finished();
  CHECK(rhaly_adjoint_integral_check(WeightSequence::custom(complex_weights), 4) <= 1e-12);
  for (const std::string text : {"dirac(0)+0.5*lebesgue", "power(0.5)", "dirac(0.5)"}) {
    CHECK(rhaly_adjoint_integral_check(
              WeightSequence::from_moments(moments(parse_measure(text), 32)), 32) <= 1e-11);
  }
}

TEST_CASE("monomial invariance dichotomy") {
  std::vector<DenseMatrix> terraced = {
      wt_matrix(0.5, 32),
      dense(TerracedOperator(WeightSequence::cesaro(32), 32)),
      dense(TerracedOperator(WeightSequence::leibowitz_squares(32), 32)),
      dense(TerracedOperator(
          WeightSequence::from_moments(moments(parse_measure("dirac(0)+0.5*lebesgue"), 32)), 32))};
  for (const DenseMatrix& a : terraced)
    for (Eigen::Index k = 0; k < 32; ++k) CHECK(monomial_invariance_check(a, k) == 0.0);

  const DenseMatrix v = dense(HankelMomentOperator(moments(parse_measure("dirac(0.5)"), 63), 32));
  CHECK(monomial_invariance_check(v, 1) == 0.5);
  for (const std::string text : {"lebesgue", "power(2)", "dirac(0)+0.5*lebesgue", "logpower(2)"}) {
    const DenseMatrix h = dense(HankelMomentOperator(moments(parse_measure(text), 63), 32));
    CHECK(monomial_invariance_check(h, 1) > 0.0);
  }
  CHECK_THROWS_AS(monomial_invariance_check(v, 32), Error);
}

TEST_CASE("kernel span rank") {
  CHECK(kernel_span_rank({0.3}, 16).rank == 1);
  std::vector<double> eight;
  for (int i = 0; i < 8; ++i) eight.push_back(0.9 * i / 7.0);
  const KernelRank r = kernel_span_rank(eight, 64);
  CHECK(r.rank == 8);
  CHECK(r.relative_threshold == 1e-10);
  // Gram entries against the closed form 1/(1 - t_i t_j): the truncation
  // error at dim 64 is below 0.81^64.
  CHECK(r.singular_values(0) > 0.0);
  CHECK_THROWS_AS(kernel_span_rank({0.5, 0.5}, 8), Error);
  CHECK_THROWS_AS(kernel_span_rank({1.0}, 8), Error);
  CHECK_THROWS_AS(kernel_span_rank({0.1, 0.2, 0.3}, 2), Error);
}

TEST_CASE("Hilbert matrix columns from the T_t expansion") {
  CHECK(hilbert_column_check(0, 1) <= 1e-15);
  CHECK(hilbert_column_check(0, 2) <= 1e-15);
  for (Eigen::Index n = 0; n <= 16; ++n) CHECK(hilbert_column_check(n, 17) <= 1e-12);
  // The Beta identity behind it.
  for (int n = 0; n <= 16; ++n)
    for (int m = 0; m <= 16; ++m)
      CHECK(std::abs(oracle::choose(n + m, m) * oracle::beta(n + 1, m + 1) - 1.0 / (n + m + 1)) <= 1e-13);
  CHECK_THROWS_AS(hilbert_column_check(5, 5), Error);
}

TEST_CASE("check report JSON") {
  CheckReport r{"monomial_invariance", {{"k", 1}}, 0.5, 1e-12, true};
  CHECK(r.to_json().dump() ==
        R"({"check":"monomial_invariance","params":{"k":1},"deviation_or_defect":0.5,"tolerance":1e-12,"pass":true})");
}
