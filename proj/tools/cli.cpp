#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "moment_spectra/error.hpp"
#include "moment_spectra/format.hpp"
#include "moment_spectra/invariance.hpp"
#include "moment_spectra/matrix_functions.hpp"
#include "moment_spectra/measure.hpp"
#include "moment_spectra/numrange.hpp"
#include "moment_spectra/operators.hpp"
#include "moment_spectra/spectral.hpp"
#include "moment_spectra/svg.hpp"

namespace moment_spectra::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Argument syntax helpers

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text, const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorKind::InvalidArgument,
                std::string("invalid number in ") + what + ": '" + text + "'");
  }
  return value;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(parse_number(trim(item), what));
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, std::string("empty ") + what);
  return values;
}

struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

// "a..b" (inclusive) or a single index "a".
IndexRange parse_range(const std::string& text) {
  const auto to_index = [&](const std::string& part) {
    const double v = parse_number(trim(part), "range");
    if (v < 0 || v != std::floor(v)) {
      throw Error(ErrorKind::InvalidArgument, "range bounds must be nonnegative integers: '" + text + "'");
    }
    return static_cast<std::size_t>(v);
  };
  const auto dots = text.find("..");
  IndexRange range;
  if (dots == std::string::npos) {
    range.first = range.last = to_index(text);
  } else {
    range.first = to_index(text.substr(0, dots));
    range.last = to_index(text.substr(dots + 2));
  }
  if (range.last < range.first) {
    throw Error(ErrorKind::InvalidArgument, "empty range '" + text + "'");
  }
  return range;
}

ComplexWindow parse_window(const std::string& text) {
  const std::vector<double> v = parse_list(text, "window");
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) {
    throw Error(ErrorKind::InvalidArgument,
                "window must be re0,re1,im0,im1 with re0 < re1 and im0 < im1");
  }
  return {v[0], v[1], v[2], v[3]};
}

std::vector<double> equispaced(int count, double hi) {
  std::vector<double> points;
  for (int i = 0; i < count; ++i) {
    points.push_back(count == 1 ? 0.0 : hi * i / (count - 1));
  }
  return points;
}

// ---------------------------------------------------------------------------
// Per-subcommand state

struct Options {
  std::string out = "out";
  std::string config;
  std::string measure = "lebesgue";
  std::string op = "rhaly";
  std::size_t n = 4096;
  std::string k = "0..5";
  long dim = 64;
  std::string window = "-0.5,2.5,-1.5,1.5";
  int res = 64;
  int angles = kDefaultAngles;
  int points = 64;
  std::string taus = "0.1,1,10";
  std::string method = "closed";
  std::string mode = "auto";
  std::string columns = "0..16";
  std::string dims = "64,128,256";
  int kernels = 8;
  double min_seconds = 0.05;

  double quad_tol = 1e-13;
  double margin = 0.1;
  double distinct_tol = 1e-12;
  double growth_residual = 1e-3;
  double slope_threshold = 0.02;
  double residual_tol = 1e-8;
  double psd_tol = 1e-10;
  double contraction_tol = 1e-9;
  double defect_tol = 1e-12;
  double integral_tol = 1e-11;
  double hilbert_tol = 1e-12;
  double norm_bound = 3.1416;
  double rank_tol = 1e-10;
  double norm_tol = 1e-12;
};

struct Artifact {
  std::string name;
  std::string content;
};

struct RunState {
  std::vector<Artifact> artifacts;
  std::vector<std::string> failures;

  void write(std::string name, std::string content) {
    artifacts.push_back({std::move(name), std::move(content)});
  }
  void fail(std::string message) { failures.push_back(std::move(message)); }
};

// Records which options a subcommand exposes so the manifest can echo them.
struct Subcommand {
  CLI::App* app = nullptr;
  Options opts;
  std::vector<std::pair<std::string, std::function<json()>>> inputs;
  std::vector<std::pair<std::string, const double*>> tolerances;
  std::function<void(Subcommand&, RunState&)> handler;

  template <typename T>
  void input(const std::string& name, T* target, const std::string& help) {
    app->add_option("--" + name, *target, help)->capture_default_str();
    inputs.emplace_back(name, [target] { return json(*target); });
  }

  void tolerance(const std::string& name, double* target, const std::string& help) {
    app->add_option("--" + name, *target, help)->capture_default_str();
    tolerances.emplace_back(name, target);
  }
};

json growth_json(const GrowthEstimate& g) {
  return json{{"beta", g.beta}, {"bounded", g.bounded}, {"slope", g.slope},
              {"fit_residual", g.fit_residual}};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

MomentSequence load_moments(const Options& o, std::size_t n_terms) {
  MomentOptions mo;
  mo.tolerance = o.quad_tol;
  if (o.method == "closed") {
    mo.method = MomentMethod::ClosedForm;
  } else if (o.method == "quadrature") {
    mo.method = MomentMethod::Quadrature;
  } else {
    throw Error(ErrorKind::InvalidArgument, "method must be 'closed' or 'quadrature'");
  }
  return moments(parse_measure(o.measure), n_terms, mo);
}

GrowthEstimate load_growth(const Options& o, const MomentSequence& m) {
  GrowthOptions go;
  go.slope_threshold = o.slope_threshold;
  go.residual_threshold = o.growth_residual;
  return growth_exponent(m, go);
}

// Operator catalog: rhaly and hankel take their data from --measure.
struct CatalogOperator {
  std::string label;
  bool terraced = true;
  std::optional<WeightSequence> weights;
  std::optional<MomentSequence> hankel_moments;

  DenseMatrix matrix(Eigen::Index dim) const {
    if (terraced) return dense(TerracedOperator(*weights, dim));
    return dense(HankelMomentOperator(*hankel_moments, dim));
  }
};

CatalogOperator load_operator(const Options& o, Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dim must be positive");
  const auto n = static_cast<std::size_t>(dim);
  CatalogOperator op;
  op.label = o.op;
  if (o.op == "rhaly") {
    op.weights = WeightSequence::from_moments(load_moments(o, std::max<std::size_t>(n, 64)));
  } else if (o.op == "cesaro") {
    op.weights = WeightSequence::cesaro(dim);
  } else if (o.op == "leibowitz") {
    op.weights = WeightSequence::leibowitz_squares(dim);
  } else if (o.op.rfind("power:", 0) == 0) {
    op.weights = WeightSequence::power_law(parse_number(o.op.substr(6), "power exponent"), dim);
  } else if (o.op == "hankel" || o.op == "hilbert") {
    op.terraced = false;
    Options data = o;
    if (o.op == "hilbert") data.measure = "lebesgue";
    op.hankel_moments = load_moments(data, 2 * n - 1);
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "unknown operator '" + o.op +
                    "' (rhaly, hankel, cesaro, power:<s>, leibowitz, hilbert)");
  }
  return op;
}

// ---------------------------------------------------------------------------
// Subcommand handlers

void cmd_moments(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  out.write("moments.csv", moments_csv(load_moments(o, o.n)));
}

void cmd_classify(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const IndexRange ks = parse_range(o.k);
  const MomentSequence m = load_moments(o, o.n);
  const GrowthEstimate g = load_growth(o, m);
  ClassifyOptions co;
  co.margin = o.margin;
  co.distinct_tolerance = o.distinct_tol;
  co.growth_residual_limit = o.growth_residual;
  if (o.mode == "auto") {
    co.mode = ClassifyMode::Auto;
  } else if (o.mode == "analytic") {
    co.mode = ClassifyMode::Analytic;
  } else if (o.mode == "numeric") {
    co.mode = ClassifyMode::NumericFit;
  } else {
    throw Error(ErrorKind::InvalidArgument, "mode must be auto, analytic or numeric");
  }
  json verdicts = json::array();
  for (std::size_t k = ks.first; k <= ks.last; ++k) {
    verdicts.push_back(json::parse(verdict_json(classify_eigenvalue(m, g, k, co))));
  }
  json doc{{"measure", o.measure}, {"n", o.n}, {"growth", growth_json(g)},
           {"verdicts", verdicts}};
  out.write("classify.json", doc.dump(2) + "\n");
}

void cmd_eigencheck(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const IndexRange ks = parse_range(o.k);
  const auto dim = static_cast<std::size_t>(o.dim);
  const std::size_t n_terms = std::max<std::size_t>(o.n, 2 * dim);
  const MomentSequence m = load_moments(o, n_terms);
  json reports = json::array();
  for (std::size_t k = ks.first; k <= ks.last; ++k) {
    const EigenvectorResult ev = eigenvector(m, k, o.dim);
    const EigenResidual r = eigenvector_residual(m, k, ev.x);
    CheckReport report;
    report.check = "eigenvector_residual";
    report.params = {{"k", k}, {"mu_k", m.values(static_cast<Eigen::Index>(k))},
                     {"dim", o.dim}, {"head", r.head}, {"tail", r.tail}};
    report.value = r.total;
    report.tolerance = o.residual_tol;
    report.pass = std::isfinite(r.total) && r.total <= o.residual_tol;
    if (!report.pass) out.fail("eigenvector residual at k=" + std::to_string(k));
    reports.push_back(report.to_json());
  }
  out.write("eigencheck.json", json{{"measure", o.measure}, {"reports", reports}}.dump(2) + "\n");
}

void cmd_adjoint_disc(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const MomentSequence m = load_moments(o, o.n);
  const GrowthEstimate g = load_growth(o, m);
  const auto disc = adjoint_disc(g);
  json doc{{"measure", o.measure}, {"n", o.n}, {"growth", growth_json(g)}};
  if (disc) {
    doc["disc"] = {{"center", *disc->disc_center}, {"radius", *disc->disc_radius},
                   {"open", disc->open_disc}};
    SvgStyle style;
    style.title = "adjoint point spectrum: " + o.measure;
    out.write("adjoint_disc.svg", svg_region(*disc, style));
  } else {
    doc["disc"] = nullptr;
  }
  out.write("adjoint_disc.json", doc.dump(2) + "\n");
}

void cmd_region(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const CatalogOperator op = load_operator(o, static_cast<Eigen::Index>(o.n));
  if (!op.terraced) throw Error(ErrorKind::InvalidArgument, "region needs a terraced operator");
  const BoundednessReport b = boundedness_report(*op.weights, static_cast<Eigen::Index>(o.n));
  const SpectralRegion region = spectrum_region(*op.weights, b, o.points);
  json points = json::array();
  for (const Complex& z : region.points) points.push_back(complex_json(z));
  json doc{{"operator", o.op},
           {"boundedness",
            {{"sup_weight", b.sup_weight},
             {"limit_estimate", b.limit_estimate ? json(*b.limit_estimate) : json(nullptr)},
             {"rhaly_norm_bound", b.rhaly_norm_bound ? json(*b.rhaly_norm_bound) : json(nullptr)},
             {"verdict", to_string(b.verdict)},
             {"tail_oscillation", b.tail_oscillation}}},
           {"points", points}};
  if (region.disc_center) {
    doc["disc"] = {{"center", *region.disc_center}, {"radius", *region.disc_radius},
                   {"open", region.open_disc}};
  } else {
    doc["disc"] = nullptr;
  }
  SvgStyle style;
  style.title = "spectrum: " + o.op;
  out.write("region.json", doc.dump(2) + "\n");
  out.write("region.svg", svg_region(region, style));
}

void cmd_pseudo(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const ComplexWindow window = parse_window(o.window);
  const CatalogOperator op = load_operator(o, o.dim);
  const PseudospectrumGrid grid = pseudospectrum_grid(op.matrix(o.dim), window, o.res);
  SvgStyle style;
  style.title = "sigma_min(zI - A), " + o.op + ", N = " + std::to_string(o.dim);
  out.write("pseudo.csv", pseudospectrum_csv(grid));
  out.write("pseudo.svg", svg_heatmap(grid.sigma_min, window, style));
}

void cmd_fov(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const DenseMatrix a = load_operator(o, o.dim).matrix(o.dim);
  const FovResult fov = fov_boundary(a, o.angles);
  const double min_eig = hermitian_min_eig(a);
  const bool pass = min_eig >= -o.psd_tol;
  if (!pass) out.fail("Re(A) has eigenvalue " + format_double(min_eig));
  json doc{{"operator", o.op}, {"dim", o.dim}, {"min_eig", min_eig},
           {"min_real_part", fov.min_real_part}, {"tolerance", o.psd_tol}, {"pass", pass}};
  SvgStyle style;
  style.log_scale = false;
  style.title = "numerical range: " + o.op;
  out.write("fov.csv", fov_csv(fov));
  out.write("fov.json", doc.dump(2) + "\n");
  out.write("fov.svg", svg_polyline(fov.boundary_points, style));
}

void cmd_contraction(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const DenseMatrix a = load_operator(o, o.dim).matrix(o.dim);
  const ContractionResult r = contraction_check(a, parse_list(o.taus, "taus"));
  const bool pass = r.max_norm <= 1.0 + o.contraction_tol;
  if (!pass) out.fail("||exp(-tau A)|| reached " + format_double(r.max_norm));
  json doc{{"operator", o.op},
           {"dim", o.dim},
           {"norms", json::parse(contraction_json(r))},
           {"max_norm", r.max_norm},
           {"tolerance", o.contraction_tol},
           {"pass", pass}};
  out.write("contraction.json", doc.dump(2) + "\n");
}

void cmd_invariance(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const IndexRange ks = parse_range(o.k);
  const CatalogOperator op = load_operator(o, o.dim);
  const DenseMatrix a = op.matrix(o.dim);
  json reports = json::array();
  const auto record = [&](CheckReport r) {
    if (!r.pass) out.fail(r.check + " " + r.params.dump());
    reports.push_back(r.to_json());
  };
  for (std::size_t k = ks.first; k <= ks.last; ++k) {
    // Terraced operators leave every z^k H^2 invariant; Hankel operators do not.
    CheckReport r;
    r.check = "monomial_invariance";
    r.params = {{"operator", o.op}, {"k", k}, {"dim", o.dim}, {"expect_invariant", op.terraced}};
    r.value = monomial_invariance_check(a, static_cast<Eigen::Index>(k));
    r.tolerance = o.defect_tol;
    r.pass = op.terraced ? r.value <= o.defect_tol : r.value > o.defect_tol;
    record(std::move(r));
  }
  if (op.terraced) {
    CheckReport r;
    r.check = "rhaly_adjoint_integral";
    r.params = {{"operator", o.op}, {"dim", o.dim}};
    r.value = rhaly_adjoint_integral_check(*op.weights, o.dim);
    r.tolerance = o.integral_tol;
    r.pass = r.value <= o.integral_tol;
    record(std::move(r));
  }
  if (o.op == "cesaro") {
    CheckReport r;
    r.check = "cesaro_adjoint_integral";
    r.params = {{"dim", o.dim}};
    r.value = cesaro_adjoint_integral_check(o.dim);
    r.tolerance = o.integral_tol;
    r.pass = r.value <= o.integral_tol;
    record(std::move(r));
  }
  if (o.kernels > 0) {
    const KernelRank kr = kernel_span_rank(equispaced(o.kernels, 0.9), o.dim, o.rank_tol);
    CheckReport r;
    r.check = "kernel_span_rank";
    r.params = {{"locations", o.kernels}, {"dim", o.dim}, {"rank", kr.rank}};
    r.value = static_cast<double>(o.kernels - kr.rank);
    r.tolerance = o.rank_tol;
    r.pass = kr.rank == o.kernels;
    record(std::move(r));
  }
  out.write("invariance.json", reports.dump(2) + "\n");
}

void cmd_hilbert(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  const IndexRange cols = parse_range(o.columns);
  json reports = json::array();
  const auto record = [&](CheckReport r) {
    if (!r.pass) out.fail(r.check + " " + r.params.dump());
    reports.push_back(r.to_json());
  };
  for (std::size_t n = cols.first; n <= cols.last; ++n) {
    CheckReport r;
    r.check = "hilbert_column";
    r.params = {{"n", n}, {"dim", o.dim}};
    r.value = hilbert_column_check(static_cast<Eigen::Index>(n), o.dim);
    r.tolerance = o.hilbert_tol;
    r.pass = r.value <= o.hilbert_tol;
    record(std::move(r));
  }
  double previous = 0.0;
  for (double d : parse_list(o.dims, "dims")) {
    const auto dim = static_cast<Eigen::Index>(d);
    Options data = o;
    data.measure = "lebesgue";
    const MomentSequence m = load_moments(data, static_cast<std::size_t>(2 * dim - 1));
    const NormEstimate est =
        spectral_norm_estimate(dense(HankelMomentOperator(m, dim)), o.norm_tol);
    CheckReport r;
    r.check = "hilbert_norm";
    r.params = {{"dim", dim}, {"iterations", est.iterations}, {"converged", est.converged},
                {"previous", previous}};
    r.value = est.norm;
    r.tolerance = o.norm_bound;
    r.pass = est.converged && est.norm <= o.norm_bound && est.norm >= previous;
    previous = est.norm;
    record(std::move(r));
  }
  out.write("hilbert.json", reports.dump(2) + "\n");
}

// O(N^2) baselines that generate matrix entries on the fly, so large N does
// not need N^2 storage.
ComplexVector terraced_direct(const WeightSequence& w, const ComplexVector& x) {
  const Eigen::Index n = x.size();
  ComplexVector y = ComplexVector::Zero(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j <= m; ++j) acc += w.values(m) * x(j);
    y(m) = acc;
  }
  return y;
}

ComplexVector hankel_direct(const MomentSequence& mu, const ComplexVector& x) {
  const Eigen::Index n = x.size();
  ComplexVector y = ComplexVector::Zero(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += mu.values(m + j) * x(j);
    y(m) = acc;
  }
  return y;
}

void cmd_bench(Subcommand& s, RunState& out) {
  const Options& o = s.opts;
  json rows = json::array();
  for (double d : parse_list(o.dims, "dims")) {
    const auto dim = static_cast<Eigen::Index>(d);
    if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dims must be positive");
    const WeightSequence w = WeightSequence::cesaro(dim);
    const TerracedOperator terraced(w, dim);
    const MomentSequence mu = load_moments(o, static_cast<std::size_t>(2 * dim - 1));
    const HankelMomentOperator hankel(mu, dim);
    ComplexVector x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = Complex(std::sin(i + 1.0), std::cos(2.0 * i));

    const auto time = [&](const char* kernel, const std::function<ComplexVector()>& apply) {
      using clock = std::chrono::steady_clock;
      long reps = 0;
      double checksum = 0.0;
      const auto start = clock::now();
      double elapsed = 0.0;
      do {
        checksum += std::abs(apply()(0));
        ++reps;
        elapsed = std::chrono::duration<double>(clock::now() - start).count();
      } while (elapsed < o.min_seconds);
      rows.push_back({{"dim", dim}, {"kernel", kernel},
                      {"ns_per_apply", std::llround(elapsed * 1e9 / reps)},
                      {"repetitions", reps}, {"checksum", checksum / reps}});
    };
    time("terraced_structured", [&] { return terraced_apply(terraced, x); });
    time("terraced_direct", [&] { return terraced_direct(w, x); });
    time("hankel_structured", [&] { return hankel_apply(hankel, x); });
    time("hankel_direct", [&] { return hankel_direct(mu, x); });
  }
  out.write("bench.json", rows.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Config file: "key = value" lines; keys are long option names without "--".
// Values are injected only for options absent from the command line.

std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path || args.empty()) return args;
  std::ifstream in(*path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read config file '" + *path + "'");
  const auto given = [&](const std::string& key) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
    });
  };
  std::vector<std::string> injected;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Syntax, *path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || key == "config") continue;
    if (!given(key)) {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
}

}  // namespace

int run(const std::vector<std::string>& raw_args) {
  CLI::App app{"Spectral experiments for moment-generated operators on H^2", "moment-spectra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::deque<Subcommand> subs;
  const auto add = [&](const char* name, const char* help,
                       std::function<void(Subcommand&, RunState&)> handler) -> Subcommand& {
    Subcommand& s = subs.emplace_back();
    s.app = app.add_subcommand(name, help);
    s.handler = std::move(handler);
    s.app->add_option("--out", s.opts.out, "output directory")->capture_default_str();
    s.app->add_option("--config", s.opts.config, "file of key = value defaults");
    return s;
  };
  const auto measure_input = [](Subcommand& s) {
    s.input("measure", &s.opts.measure, "measure, e.g. \"dirac(0)+0.5*lebesgue\"");
    s.input("method", &s.opts.method, "moment method: closed | quadrature");
    s.tolerance("quad-tol", &s.opts.quad_tol, "absolute quadrature tolerance");
  };
  const auto growth_input = [](Subcommand& s) {
    s.tolerance("slope-threshold", &s.opts.slope_threshold, "slope below which s_n counts as bounded");
    s.tolerance("growth-residual", &s.opts.growth_residual, "RMS residual limit of the growth fit");
  };
  const auto operator_input = [&](Subcommand& s) {
    s.input("operator", &s.opts.op, "rhaly | hankel | cesaro | power:<s> | leibowitz | hilbert");
    measure_input(s);
  };

  {
    Subcommand& s = add("moments", "moment sequence and partial sums as CSV", cmd_moments);
    s.opts.n = 8;
    measure_input(s);
    s.input("n", &s.opts.n, "number of moments");
  }
  {
    Subcommand& s = add("classify", "point-spectrum verdicts for mu_k", cmd_classify);
    measure_input(s);
    growth_input(s);
    s.input("n", &s.opts.n, "number of moments");
    s.input("k", &s.opts.k, "index range a..b");
    s.input("mode", &s.opts.mode, "auto | analytic | numeric");
    s.tolerance("margin", &s.opts.margin, "required distance of the exponent from -1/2");
    s.tolerance("distinct-tol", &s.opts.distinct_tol, "distinctness tolerance relative to mu_0");
  }
  {
    Subcommand& s = add("eigencheck", "eigenvector residuals", cmd_eigencheck);
    s.opts.dim = 400;
    measure_input(s);
    s.input("n", &s.opts.n, "number of moments (at least 2 dim are used)");
    s.input("k", &s.opts.k, "index range a..b");
    s.input("dim", &s.opts.dim, "truncation dimension");
    s.tolerance("residual-tol", &s.opts.residual_tol, "residual bound");
  }
  {
    Subcommand& s = add("adjoint-disc", "disc of eigenvalues of the adjoint", cmd_adjoint_disc);
    measure_input(s);
    growth_input(s);
    s.input("n", &s.opts.n, "number of moments");
  }
  {
    Subcommand& s = add("region", "predicted spectrum of a terraced operator", cmd_region);
    operator_input(s);
    s.input("n", &s.opts.n, "number of weights examined");
    s.input("points", &s.opts.points, "number of isolated points reported");
  }
  {
    Subcommand& s = add("pseudo", "sigma_min(zI - A_N) on a grid", cmd_pseudo);
    s.opts.dim = 256;
    operator_input(s);
    s.input("dim", &s.opts.dim, "truncation dimension");
    s.input("window", &s.opts.window, "re0,re1,im0,im1");
    s.input("res", &s.opts.res, "grid points per axis");
  }
  {
    Subcommand& s = add("fov", "numerical range boundary", cmd_fov);
    s.opts.dim = 256;
    operator_input(s);
    s.input("dim", &s.opts.dim, "truncation dimension");
    s.input("angles", &s.opts.angles, "number of support directions");
    s.tolerance("psd-tol", &s.opts.psd_tol, "allowed negative eigenvalue of Re(A)");
  }
  {
    Subcommand& s = add("contraction", "norms of exp(-tau A_N)", cmd_contraction);
    operator_input(s);
    s.input("dim", &s.opts.dim, "truncation dimension");
    s.input("taus", &s.opts.taus, "comma-separated positive times");
    s.tolerance("contraction-tol", &s.opts.contraction_tol, "allowed excess over 1");
  }
  {
    Subcommand& s = add("invariance", "invariant subspace and integral checks", cmd_invariance);
    s.opts.k = "1..8";
    operator_input(s);
    s.input("dim", &s.opts.dim, "truncation dimension");
    s.input("k", &s.opts.k, "monomial range a..b");
    s.input("kernels", &s.opts.kernels, "kernel locations in [0, 0.9] for the rank check (0 = off)");
    s.tolerance("defect-tol", &s.opts.defect_tol, "invariance defect counted as zero");
    s.tolerance("integral-tol", &s.opts.integral_tol, "integral representation tolerance");
    s.tolerance("rank-tol", &s.opts.rank_tol, "relative singular value threshold");
  }
  {
    Subcommand& s = add("hilbert", "Hilbert matrix column and norm checks", cmd_hilbert);
    s.opts.dim = 17;
    s.input("columns", &s.opts.columns, "column range a..b");
    s.input("dim", &s.opts.dim, "rows checked per column");
    s.input("dims", &s.opts.dims, "comma-separated dimensions for the norm sweep");
    s.tolerance("hilbert-tol", &s.opts.hilbert_tol, "column integral tolerance");
    s.tolerance("norm-bound", &s.opts.norm_bound, "upper bound on the norm");
    s.tolerance("norm-tol", &s.opts.norm_tol, "Lanczos tolerance for the norm");
  }
  {
    Subcommand& s = add("bench", "structured versus O(N^2) apply timings", cmd_bench);
    s.opts.dims = "256,1024,8192";
    s.input("dims", &s.opts.dims, "comma-separated dimensions");
    s.input("min-seconds", &s.opts.min_seconds, "minimum timing per kernel");
  }

  RunState run_state;

  try {
    std::vector<std::string> args = apply_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  Subcommand* chosen = nullptr;
  for (Subcommand& s : subs) {
    if (s.app->parsed()) chosen = &s;
  }
  if (chosen == nullptr) return kExitInputError;

  const auto start = std::chrono::steady_clock::now();
  try {
    chosen->handler(*chosen, run_state);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  try {
    const fs::path out_dir(chosen->opts.out);
    fs::create_directories(out_dir);
    json outputs = json::array();
    for (const Artifact& a : run_state.artifacts) {
      write_file(out_dir / a.name, a.content);
      outputs.push_back(a.name);
    }
    json inputs = json::object();
    for (const auto& [name, value] : chosen->inputs) inputs[name] = value();
    if (!chosen->opts.config.empty()) inputs["config"] = chosen->opts.config;
    json tolerances = json::object();
    for (const auto& [name, value] : chosen->tolerances) tolerances[name] = *value;
    json manifest{
        {"command", chosen->app->get_name()},
        {"inputs", inputs},
        {"tolerances", tolerances},
        {"outputs", outputs},
        {"wall_time_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()},
        {"tool_version", kToolVersion},
    };
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (!run_state.failures.empty()) {
    for (const std::string& f : run_state.failures) std::cerr << "check failed: " << f << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace moment_spectra::cli
