#include "moment_spectra/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "moment_spectra/error.hpp"

namespace moment_spectra {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double apply_rule(const GaussLegendreRule& rule,
                  const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

struct Panel {
  double a;
  double b;
  double coarse;
  int depth;
};

}  // namespace

const GaussLegendreRule& gauss_legendre(int n_points) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n_points);
  if (it == cache.end()) {
    it = cache.emplace(n_points, build_rule(n_points)).first;
  }
  return it->second;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& options) {
  QuadratureResult result;
  if (a == b) return result;
  const GaussLegendreRule& rule = gauss_legendre(15);
  const double total_width = b - a;

  std::vector<Panel> stack;
  stack.push_back({a, b, apply_rule(rule, f, a, b), 0});
  double unresolved = 0.0;
  int evaluated = 0;

  while (!stack.empty()) {
    const Panel panel = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (panel.a + panel.b);
    const double left = apply_rule(rule, f, panel.a, mid);
    const double right = apply_rule(rule, f, mid, panel.b);
    const double fine = left + right;
    const double estimate = std::abs(fine - panel.coarse);
    const double share =
        options.abs_tolerance * (panel.b - panel.a) / total_width;
    ++evaluated;

    const bool exhausted = panel.depth >= options.max_depth ||
                           evaluated + static_cast<int>(stack.size()) >=
                               options.max_intervals;
    if (estimate <= share || exhausted) {
      result.value += fine;
      result.error_bound += estimate;
      ++result.intervals;
      if (estimate > share) unresolved += estimate;
      continue;
    }
    stack.push_back({mid, panel.b, right, panel.depth + 1});
    stack.push_back({panel.a, mid, left, panel.depth + 1});
  }

  if (unresolved > 0.0 && result.error_bound > options.abs_tolerance) {
    throw QuadratureError(result.error_bound, options.abs_tolerance);
  }
  return result;
}

}  // namespace moment_spectra
