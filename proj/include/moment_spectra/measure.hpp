#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace moment_spectra {

/// Point mass at t in [0, 1).
struct Dirac {
  double t = 0.0;
};

/// Lebesgue measure restricted to [0, r], r in (0, 1].
struct Lebesgue {
  double r = 1.0;
};

/// Density t^alpha on [0, 1), alpha > 0.
struct PowerDensity {
  double alpha = 1.0;
};

/// Density (-log t)^(s-1) / Gamma(s) on (0, 1), s > 1. Moments (n+1)^(-s).
struct LogPowerDensity {
  double s = 2.0;
};

using Atom = std::variant<Dirac, Lebesgue, PowerDensity, LogPowerDensity>;

struct MeasureTerm {
  double weight = 1.0;
  Atom atom;
};

/// Finite positive Borel measure on [0, 1) as a positive combination of atoms.
struct MeasureSpec {
  std::vector<MeasureTerm> terms;

  /// True when every term is a point mass at 0.
  bool concentrated_at_zero() const;
};

/// Validates weights and atom parameters; throws Error(InvalidArgument).
void validate(const MeasureSpec& spec);

/// Parses the measure mini-language, e.g. "dirac(0)+0.5*lebesgue".
/// Throws ParseError (with byte position) or Error(InvalidArgument).
MeasureSpec parse_measure(std::string_view text);

/// Canonical textual form; parse_measure(to_string(spec)) reproduces spec.
std::string to_string(const MeasureSpec& spec);

struct Provenance {
  enum class Kind { ClosedForm, Quadrature };
  Kind kind = Kind::ClosedForm;
  double error_bound = 0.0;
};

struct MomentSequence {
  Eigen::VectorXd values;        // mu_n
  Eigen::VectorXd partial_sums;  // s_n = sum_{j<=n} mu_j
  std::vector<Provenance> provenance;
  bool degenerate = false;       // measure concentrated at 0

  std::size_t n_terms() const { return static_cast<std::size_t>(values.size()); }

  /// Builds a sequence from raw values (partial sums recomputed).
  static MomentSequence from_values(Eigen::VectorXd values,
                                    Provenance provenance = {});
};

enum class MomentMethod {
  ClosedForm,  // closed forms for every atom
  Quadrature,  // adaptive quadrature for every density atom
};

struct MomentOptions {
  MomentMethod method = MomentMethod::ClosedForm;
  double tolerance = 1e-13;
};

/// mu_n = \int t^n dmu for n < n_terms. Throws QuadratureError on failure.
MomentSequence moments(const MeasureSpec& spec, std::size_t n_terms,
                       const MomentOptions& options = {});

/// Neumaier-compensated running sums.
Eigen::VectorXd partial_sums(const Eigen::VectorXd& values);

struct GrowthEstimate {
  double beta = 0.0;        // s_n ~ beta log n
  bool bounded = false;
  double slope = 0.0;       // raw fitted slope, before the bounded clamp
  double fit_residual = 0.0;
};

struct GrowthOptions {
  double slope_threshold = 0.02;
  double residual_threshold = 1e-3;
};

/// Least-squares fit of s_n against log(n+1) over [n_terms/2, n_terms).
/// Requires n_terms >= 64.
GrowthEstimate growth_exponent(const MomentSequence& moments,
                               const GrowthOptions& options = {});

/// CSV with header "n,mu_n,s_n,provenance".
std::string moments_csv(const MomentSequence& moments);

}  // namespace moment_spectra
