#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "moment_spectra/spectral.hpp"

namespace moment_spectra {

struct SvgStyle {
  int width = 480;
  int height = 480;
  bool log_scale = true;  // heatmaps: colour by log10(value)
  std::string title;
};

/// Self-contained SVG documents (no external references). All throw
/// Error(InvalidArgument) on empty data.

/// One rect per grid cell; row i of values is the i-th imaginary-axis sample.
std::string svg_heatmap(const Eigen::MatrixXd& values, const ComplexWindow& window,
                        const SvgStyle& style = {});

/// Closed polyline through the points (FOV boundary).
std::string svg_polyline(const std::vector<Complex>& points, const SvgStyle& style = {});

/// Disc outline (when present) with the point set overlaid as a scatter.
std::string svg_region(const SpectralRegion& region, const SvgStyle& style = {});

}  // namespace moment_spectra
