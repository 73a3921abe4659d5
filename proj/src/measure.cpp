#include "moment_spectra/measure.hpp"

#include <cmath>
#include <string>

#include "moment_spectra/error.hpp"
#include "moment_spectra/format.hpp"
#include "moment_spectra/quadrature.hpp"

namespace moment_spectra {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double closed_form_moment(const Atom& atom, std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::visit(
      Overloaded{
          [&](const Dirac& a) { return std::pow(a.t, nd); },
          [&](const Lebesgue& a) { return std::pow(a.r, nd + 1.0) / (nd + 1.0); },
          [&](const PowerDensity& a) { return 1.0 / (nd + a.alpha + 1.0); },
          [&](const LogPowerDensity& a) { return std::pow(nd + 1.0, -a.s); },
      },
      atom);
}

// Quadrature path; Dirac atoms have no density and stay closed-form.
QuadratureResult quadrature_moment(const Atom& atom, std::size_t n,
                                   double tolerance) {
  const double nd = static_cast<double>(n);
  QuadratureOptions options;
  options.abs_tolerance = tolerance;
  return std::visit(
      Overloaded{
          [&](const Dirac& a) {
            return QuadratureResult{std::pow(a.t, nd), 0.0, 0};
          },
          [&](const Lebesgue& a) {
            return integrate([nd](double t) { return std::pow(t, nd); }, 0.0,
                             a.r, options);
          },
          [&](const PowerDensity& a) {
            const double p = nd + a.alpha;
            return integrate([p](double t) { return std::pow(t, p); }, 0.0,
                             1.0, options);
          },
          [&](const LogPowerDensity& a) {
            // In x = -log t the density becomes e^{-(n+1)x} x^{s-1} / Gamma(s)
            // on (0, inf); integrate panels [0, X], [X, 2X], ... until the
            // contribution is negligible.
            const double c = nd + 1.0;
            const double log_gamma = std::lgamma(a.s);
            const auto f = [c, s = a.s, log_gamma](double x) {
              if (x <= 0.0) return 0.0;
              return std::exp(-c * x + (s - 1.0) * std::log(x) - log_gamma);
            };
            double lo = 0.0;
            double hi = (a.s + 40.0) / c;
            QuadratureOptions panel = options;
            panel.abs_tolerance = 0.5 * tolerance;
            QuadratureResult total = integrate(f, lo, hi, panel);
            for (int chunk = 0; chunk < 64; ++chunk) {
              lo = hi;
              hi *= 2.0;
              panel.abs_tolerance *= 0.5;
              const QuadratureResult part = integrate(f, lo, hi, panel);
              total.value += part.value;
              total.error_bound += part.error_bound;
              total.intervals += part.intervals;
              if (std::abs(part.value) < 1e-3 * panel.abs_tolerance) break;
            }
            return total;
          },
      },
      atom);
}

}  // namespace

bool MeasureSpec::concentrated_at_zero() const {
  if (terms.empty()) return false;
  for (const MeasureTerm& term : terms) {
    const auto* dirac = std::get_if<Dirac>(&term.atom);
    if (dirac == nullptr || dirac->t != 0.0) return false;
  }
  return true;
}

void validate(const MeasureSpec& spec) {
  if (spec.terms.empty()) {
    throw Error(ErrorKind::InvalidArgument, "measure has no terms");
  }
  for (const MeasureTerm& term : spec.terms) {
    if (!(term.weight > 0.0) || !std::isfinite(term.weight)) {
      throw Error(ErrorKind::InvalidArgument, "weight must be finite and > 0");
    }
    std::visit(
        Overloaded{
            [](const Dirac& a) {
              if (!(a.t >= 0.0 && a.t < 1.0)) {
                throw Error(ErrorKind::InvalidArgument,
                            "dirac location must be in [0,1)");
              }
            },
            [](const Lebesgue& a) {
              if (!(a.r > 0.0 && a.r <= 1.0)) {
                throw Error(ErrorKind::InvalidArgument,
                            "lebesgue r must be in (0,1]");
              }
            },
            [](const PowerDensity& a) {
              if (!(a.alpha > 0.0) || !std::isfinite(a.alpha)) {
                throw Error(ErrorKind::InvalidArgument,
                            "power alpha must be > 0");
              }
            },
            [](const LogPowerDensity& a) {
              if (!(a.s > 1.0) || !std::isfinite(a.s)) {
                throw Error(ErrorKind::InvalidArgument,
                            "logpower s must be > 1");
              }
            },
        },
        term.atom);
  }
}

Eigen::VectorXd partial_sums(const Eigen::VectorXd& values) {
  Eigen::VectorXd sums(values.size());
  double sum = 0.0;
  double compensation = 0.0;
  for (Eigen::Index n = 0; n < values.size(); ++n) {
    const double v = values[n];
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
    sums[n] = sum + compensation;
  }
  return sums;
}

MomentSequence MomentSequence::from_values(Eigen::VectorXd values,
                                           Provenance provenance) {
  MomentSequence seq;
  seq.partial_sums = moment_spectra::partial_sums(values);
  seq.provenance.assign(static_cast<std::size_t>(values.size()), provenance);
  seq.values = std::move(values);
  return seq;
}

MomentSequence moments(const MeasureSpec& spec, std::size_t n_terms,
                       const MomentOptions& options) {
  if (n_terms < 1) {
    throw Error(ErrorKind::InvalidArgument, "n_terms must be >= 1");
  }
  validate(spec);

  const auto size = static_cast<Eigen::Index>(n_terms);
  MomentSequence seq;
  seq.values = Eigen::VectorXd::Zero(size);
  seq.provenance.assign(n_terms, Provenance{});
  seq.degenerate = spec.concentrated_at_zero();

  bool uses_quadrature = false;
  for (const MeasureTerm& term : spec.terms) {
    if (options.method == MomentMethod::Quadrature &&
        !std::holds_alternative<Dirac>(term.atom)) {
      uses_quadrature = true;
    }
  }
  const double per_term_tolerance =
      options.tolerance / static_cast<double>(spec.terms.size());

  for (std::size_t n = 0; n < n_terms; ++n) {
    double value = 0.0;
    double bound = 0.0;
    for (const MeasureTerm& term : spec.terms) {
      if (uses_quadrature) {
        const QuadratureResult q = quadrature_moment(
            term.atom, n, per_term_tolerance / term.weight);
        value += term.weight * q.value;
        bound += term.weight * q.error_bound;
      } else {
        value += term.weight * closed_form_moment(term.atom, n);
      }
    }
    seq.values[static_cast<Eigen::Index>(n)] = value;
    if (uses_quadrature) {
      if (bound > options.tolerance) {
        throw QuadratureError(bound, options.tolerance);
      }
      seq.provenance[n] = {Provenance::Kind::Quadrature, bound};
    }
  }
  seq.partial_sums = partial_sums(seq.values);
  return seq;
}

GrowthEstimate growth_exponent(const MomentSequence& moments,
                               const GrowthOptions& options) {
  const std::size_t n_terms = moments.n_terms();
  if (n_terms < 64) {
    throw Error(ErrorKind::InvalidArgument,
                "growth_exponent needs at least 64 moments");
  }
  const std::size_t lo = n_terms / 2;
  const double count = static_cast<double>(n_terms - lo);

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t n = lo; n < n_terms; ++n) {
    mean_x += std::log(static_cast<double>(n) + 1.0);
    mean_y += moments.partial_sums[static_cast<Eigen::Index>(n)];
  }
  mean_x /= count;
  mean_y /= count;

  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t n = lo; n < n_terms; ++n) {
    const double dx = std::log(static_cast<double>(n) + 1.0) - mean_x;
    const double dy = moments.partial_sums[static_cast<Eigen::Index>(n)] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  double ss = 0.0;
  for (std::size_t n = lo; n < n_terms; ++n) {
    const double x = std::log(static_cast<double>(n) + 1.0);
    const double r =
        moments.partial_sums[static_cast<Eigen::Index>(n)] - (intercept + slope * x);
    ss += r * r;
  }

  GrowthEstimate g;
  g.slope = slope;
  g.fit_residual = std::sqrt(ss / count);
  g.bounded = slope < options.slope_threshold &&
              g.fit_residual < options.residual_threshold;
  g.beta = g.bounded ? 0.0 : std::max(slope, 0.0);
  return g;
}

std::string moments_csv(const MomentSequence& moments) {
  std::string out = "n,mu_n,s_n,provenance\n";
  for (std::size_t n = 0; n < moments.n_terms(); ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    const Provenance& p = moments.provenance[n];
    out += std::to_string(n) + "," + format_double(moments.values[i]) + "," +
           format_double(moments.partial_sums[i]) + ",";
    out += p.kind == Provenance::Kind::ClosedForm
               ? std::string("closed_form")
               : "quadrature(" + format_double(p.error_bound) + ")";
    out += "\n";
  }
  return out;
}

}  // namespace moment_spectra
