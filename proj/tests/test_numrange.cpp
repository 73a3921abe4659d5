#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "moment_spectra/error.hpp"
#include "moment_spectra/matrix_functions.hpp"
#include "moment_spectra/measure.hpp"
#include "moment_spectra/numrange.hpp"
#include "moment_spectra/operators.hpp"
#include "oracles.hpp"

using namespace moment_spectra;

namespace {

// The catalog of operators whose Hermitian parts are positive semidefinite.
std::vector<std::pair<std::string, DenseMatrix>> catalog(Eigen::Index n) {
  std::vector<std::pair<std::string, DenseMatrix>> ops;
  ops.emplace_back("cesaro", dense(TerracedOperator(WeightSequence::cesaro(n), n)));
  for (const std::string text : {"power(0.5)", "power(2)", "dirac(0)+0.5*lebesgue"}) {
    ops.emplace_back(text, dense(TerracedOperator(
                               WeightSequence::from_moments(moments(parse_measure(text), n)), n)));
  }
  ops.emplace_back("hilbert", oracle::hankel(oracle::hilbert_moments(2 * n - 1), n));
  ops.emplace_back("hankel dirac(0.5)",
                   dense(HankelMomentOperator(moments(parse_measure("dirac(0.5)"), 2 * n - 1), n)));
  return ops;
}

}  // namespace

TEST_CASE("hermitian_min_eig examples") {
  const DenseMatrix c2 = dense(TerracedOperator(WeightSequence::cesaro(2), 2));
  CHECK(std::abs(hermitian_min_eig(c2) - (1.5 - std::sqrt(0.5)) / 2.0) <= 1e-15);
  CHECK(hermitian_min_eig(DenseMatrix::Identity(1, 1)) == 1.0);
  for (Eigen::Index n : {1, 10, 100}) {
    const DenseMatrix v =
        dense(HankelMomentOperator(moments(parse_measure("dirac(0.3)"), 2 * n - 1), n));
    CHECK(hermitian_min_eig(v) >= -1e-15);
  }
  CHECK_THROWS_AS(hermitian_min_eig(DenseMatrix::Zero(2, 3)), Error);
}

TEST_CASE("fov_boundary examples") {
  const FovResult id = fov_boundary(DenseMatrix::Identity(5, 5), 16);
  for (const Complex& z : id.boundary_points) CHECK(std::abs(z - 1.0) <= 1e-14);

  DenseMatrix shift = DenseMatrix::Zero(2, 2);
  shift(0, 1) = 1.0;
  const FovResult s = fov_boundary(shift, 64);
  for (std::size_t i = 0; i < s.boundary_points.size(); ++i) {
    CHECK(std::abs(std::abs(s.boundary_points[i]) - 0.5) <= 1e-12);
    CHECK(std::abs(s.support_values[i] - 0.5) <= 1e-12);
  }
  // Brute force over random unit vectors never leaves the radius-1/2 disc
  // and gets close to its edge.
  std::mt19937_64 rng(37);
  double largest = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const ComplexVector x = oracle::random_unit_vector(2, rng);
    const double r = std::abs(x.dot(shift * x));
    CHECK(r <= 0.5 + 1e-12);
    largest = std::max(largest, r);
  }
  CHECK(largest > 0.49);

  const FovResult c = fov_boundary(dense(TerracedOperator(WeightSequence::cesaro(64), 64)));
  CHECK(c.thetas.size() == kDefaultAngles);
  CHECK(c.min_real_part >= -1e-10);
  CHECK(c.min_real_part == -support_function(dense(TerracedOperator(WeightSequence::cesaro(64), 64)), std::numbers::pi));

  CHECK_THROWS_AS(fov_boundary(shift, 3), Error);
}

TEST_CASE("fov boundary points lie within the norm disc") {
  for (const auto& [name, a] : catalog(48)) {
    CAPTURE(name);
    const FovResult f = fov_boundary(a, 64);
    const double norm = oracle::spectral_norm(a);
    for (const Complex& z : f.boundary_points) CHECK(std::abs(z) <= norm + 1e-8);
  }
}

TEST_CASE("property: compression monotonicity of the support function") {
  for (Eigen::Index n : {8, 32, 64}) {
    const auto small = catalog(n);
    const auto large = catalog(2 * n);
    for (std::size_t i = 0; i < small.size(); ++i) {
      CAPTURE(small[i].first);
      for (int j = 0; j < 24; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / 24;
        CHECK(support_function(small[i].second, theta) <=
              support_function(large[i].second, theta) + 1e-10);
      }
    }
  }
}

TEST_CASE("property: min-eig and fov min real part agree") {
  for (const auto& [name, a] : catalog(64)) {
    CAPTURE(name);
    const double eig = hermitian_min_eig(a);
    const FovResult f = fov_boundary(a, 32);
    CHECK(eig >= -1e-10);
    CHECK(f.min_real_part >= -1e-10);
    CHECK(std::abs(eig - f.min_real_part) <= 1e-10);
  }
}

TEST_CASE("property: contraction iff dissipative, with a shifted counterexample") {
  const std::vector<double> taus = {0.1, 1.0, 10.0};
  for (const auto& [name, a] : catalog(64)) {
    CAPTURE(name);
    REQUIRE(hermitian_min_eig(a) >= -1e-10);
    CHECK(contraction_check(a, taus).max_norm <= 1.0 + 1e-9);

    const DenseMatrix shifted = a - 0.1 * DenseMatrix::Identity(64, 64);
    CHECK(hermitian_min_eig(shifted) < 0.0);
    CHECK(contraction_check(shifted, taus).max_norm > 1.0 + 1e-9);
  }
  const ContractionResult zero = contraction_check(DenseMatrix::Zero(4, 4), taus);
  for (double n : zero.norms) CHECK(std::abs(n - 1.0) <= 1e-15);
}

TEST_CASE("contraction norms match direct exponentiation and SVD") {
  const DenseMatrix c = dense(TerracedOperator(WeightSequence::cesaro(32), 32));
  const ContractionResult r = contraction_check(c, {0.5, 2.0});
  REQUIRE(r.norms.size() == 2);
  CHECK(std::abs(r.norms[0] - oracle::spectral_norm(expm(-0.5 * c))) <= 1e-10);
  CHECK(std::abs(r.norms[1] - oracle::spectral_norm(expm(-2.0 * c))) <= 1e-10);
  CHECK(r.max_norm == std::max(r.norms[0], r.norms[1]));
  CHECK_THROWS_AS(contraction_check(c, {}), Error);
  CHECK_THROWS_AS(contraction_check(c, {-1.0}), Error);
  const nlohmann::json j = nlohmann::json::parse(contraction_json(r));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["tau"] == 0.5);
  CHECK(j[0]["norm"].get<double>() == r.norms[0]);
}

TEST_CASE("property: quadratic-form spot check") {
  std::mt19937_64 rng(41);
  for (const auto& [name, a] : catalog(64)) {
    CAPTURE(name);
    const FovResult f = fov_boundary(a, 64);
    for (int i = 0; i < 200; ++i) {
      const ComplexVector x = oracle::random_unit_vector(64, rng);
      CHECK(x.dot(a * x).real() >= f.min_real_part - 1e-10);
    }
  }
}

TEST_CASE("fov CSV") {
  const std::string csv = fov_csv(fov_boundary(DenseMatrix::Identity(2, 2), 4));
  CHECK(csv.rfind("theta,re,im,h\n0,1,0,1\n", 0) == 0);
}
