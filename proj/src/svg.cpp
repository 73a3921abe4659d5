#include "moment_spectra/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "moment_spectra/error.hpp"

namespace moment_spectra {

namespace {

std::string fixed(double v) {
  std::array<char, 48> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%.3f", v);
  std::string s(buffer.data());
  return s == "-0.000" ? "0.000" : s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const SvgStyle& style) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(style.width) + "\" height=\"" +
         std::to_string(style.height) + "\" viewBox=\"0 0 " +
         std::to_string(style.width) + " " + std::to_string(style.height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(style.width) +
         "\" height=\"" + std::to_string(style.height) + "\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    out += "<title>" + escape(style.title) + "</title>\n";
  }
  return out;
}

// Linear map from a complex-plane box to the canvas, y axis pointing up.
struct Frame {
  double re_min, re_max, im_min, im_max;
  double width, height;

  double x(double re) const { return (re - re_min) / (re_max - re_min) * width; }
  double y(double im) const { return (im_max - im) / (im_max - im_min) * height; }
};

Frame padded_frame(double re_min, double re_max, double im_min, double im_max,
                   const SvgStyle& style) {
  double span = std::max(re_max - re_min, im_max - im_min);
  if (!(span > 0.0)) span = 1.0;
  const double pad = 0.1 * span;
  const double cx = 0.5 * (re_min + re_max);
  const double cy = 0.5 * (im_min + im_max);
  const double half = 0.5 * span + pad;
  return {cx - half, cx + half, cy - half, cy + half,
          static_cast<double>(style.width), static_cast<double>(style.height)};
}

std::string axes(const Frame& f) {
  std::string out;
  if (f.im_min <= 0.0 && f.im_max >= 0.0) {
    out += "<line x1=\"0\" y1=\"" + fixed(f.y(0.0)) + "\" x2=\"" + fixed(f.width) +
           "\" y2=\"" + fixed(f.y(0.0)) + "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  }
  if (f.re_min <= 0.0 && f.re_max >= 0.0) {
    out += "<line x1=\"" + fixed(f.x(0.0)) + "\" y1=\"0\" x2=\"" + fixed(f.x(0.0)) +
           "\" y2=\"" + fixed(f.height) + "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  }
  return out;
}

// Dark-blue to yellow ramp.
std::string colour(double level) {
  level = std::clamp(level, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(20 + level * 233));
  const int g = static_cast<int>(std::lround(30 + level * 201));
  const int b = static_cast<int>(std::lround(110 - level * 80));
  std::array<char, 16> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "#%02x%02x%02x", r, g, b);
  return buffer.data();
}

}  // namespace

std::string svg_heatmap(const Eigen::MatrixXd& values, const ComplexWindow& window,
                        const SvgStyle& style) {
  if (values.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty grid");
  Eigen::MatrixXd levels = values;
  if (style.log_scale) {
    const double floor = 1e-300;
    levels = values.unaryExpr([floor](double v) { return std::log10(std::max(v, floor)); });
  }
  const double lo = levels.minCoeff();
  const double hi = levels.maxCoeff();
  const double range = hi > lo ? hi - lo : 1.0;

  const Eigen::Index rows = values.rows();
  const Eigen::Index cols = values.cols();
  const double cell_w = static_cast<double>(style.width) / cols;
  const double cell_h = static_cast<double>(style.height) / rows;

  std::string out = header(style);
  out += "<!-- window re [" + fixed(window.re_min) + ", " + fixed(window.re_max) +
         "] im [" + fixed(window.im_min) + ", " + fixed(window.im_max) + "] -->\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    // Row 0 is the smallest imaginary part and sits at the bottom.
    const double y = (rows - 1 - i) * cell_h;
    for (Eigen::Index j = 0; j < cols; ++j) {
      out += "<rect x=\"" + fixed(j * cell_w) + "\" y=\"" + fixed(y) + "\" width=\"" +
             fixed(cell_w) + "\" height=\"" + fixed(cell_h) + "\" fill=\"" +
             colour((levels(i, j) - lo) / range) + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string svg_polyline(const std::vector<Complex>& points, const SvgStyle& style) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "empty boundary");
  double re_min = std::numeric_limits<double>::infinity();
  double re_max = -re_min;
  double im_min = re_min;
  double im_max = -re_min;
  for (const Complex& p : points) {
    re_min = std::min(re_min, p.real());
    re_max = std::max(re_max, p.real());
    im_min = std::min(im_min, p.imag());
    im_max = std::max(im_max, p.imag());
  }
  const Frame f = padded_frame(re_min, re_max, im_min, im_max, style);
  std::string out = header(style) + axes(f);
  out += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i <= points.size(); ++i) {
    const Complex& p = points[i % points.size()];
    if (i > 0) out += " ";
    out += fixed(f.x(p.real())) + "," + fixed(f.y(p.imag()));
  }
  out += "\"/>\n</svg>\n";
  return out;
}

std::string svg_region(const SpectralRegion& region, const SvgStyle& style) {
  const bool has_disc = region.disc_center && region.disc_radius;
  if (region.points.empty() && !has_disc) {
    throw Error(ErrorKind::InvalidArgument, "empty region");
  }
  double re_min = std::numeric_limits<double>::infinity();
  double re_max = -re_min;
  double im_min = re_min;
  double im_max = -re_min;
  for (const Complex& p : region.points) {
    re_min = std::min(re_min, p.real());
    re_max = std::max(re_max, p.real());
    im_min = std::min(im_min, p.imag());
    im_max = std::max(im_max, p.imag());
  }
  if (has_disc) {
    re_min = std::min(re_min, *region.disc_center - *region.disc_radius);
    re_max = std::max(re_max, *region.disc_center + *region.disc_radius);
    im_min = std::min(im_min, -*region.disc_radius);
    im_max = std::max(im_max, *region.disc_radius);
  }
  const Frame f = padded_frame(re_min, re_max, im_min, im_max, style);
  std::string out = header(style) + axes(f);
  if (has_disc) {
    const double r = *region.disc_radius / (f.re_max - f.re_min) * f.width;
    out += "<circle cx=\"" + fixed(f.x(*region.disc_center)) + "\" cy=\"" +
           fixed(f.y(0.0)) + "\" r=\"" + fixed(r) +
           "\" fill=\"#cfe0f5\" fill-opacity=\"0.6\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"" +
           (region.open_disc ? " stroke-dasharray=\"4,3\"" : "") + "/>\n";
  }
  for (const Complex& p : region.points) {
    out += "<circle cx=\"" + fixed(f.x(p.real())) + "\" cy=\"" + fixed(f.y(p.imag())) +
           "\" r=\"2.5\" fill=\"#c0392b\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace moment_spectra
