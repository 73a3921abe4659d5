#pragma once

#include <functional>
#include <vector>

namespace moment_spectra {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computes the n-point rule by Newton iteration on P_n. Cached per n.
const GaussLegendreRule& gauss_legendre(int n_points);

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  int intervals = 0;
};

struct QuadratureOptions {
  double abs_tolerance = 1e-13;
  int max_depth = 48;
  int max_intervals = 20000;
};

/// Adaptive Gauss–Legendre on [a, b].
///
/// Each panel is integrated with a 15-point rule and again on its two halves;
/// the difference is the local error estimate. Panels are bisected until the
/// estimate falls below the tolerance share proportional to the panel width.
/// The refined value is accumulated, so error_bound is conservative.
/// Throws QuadratureError when the budget runs out above tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& options = {});

}  // namespace moment_spectra
